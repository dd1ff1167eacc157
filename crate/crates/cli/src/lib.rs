//! `beliefnet` command-line pipeline: prep, learn, fit, query, sobol,
//! scenario, sensitivity and export over a workspace directory.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod fixture;
pub mod manifest;
pub mod workspace;

use clap::Parser;

use crate::cli::Cli;
use crate::error::{CliError, CliResult};

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
}

fn dispatch(cli: &Cli, argv: Vec<String>) -> CliResult<()> {
    match cli.threads {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::usage(format!("cannot start {n} worker threads: {e}")))?
            .install(|| commands::run(cli, argv)),
        _ => commands::run(cli, argv),
    }
}

/// Parse `argv`, run the command and return the process exit code.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    init_logging(cli.verbose);
    match dispatch(&cli, argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
