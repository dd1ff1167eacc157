//! Command implementations. Each command computes every output in memory,
//! then writes them in order (tables first, charts next, manifest last).

mod analyze;
mod learn;
mod prep;

use std::path::{Path, PathBuf};

use beliefnet::data::{self, DataTable};
use beliefnet::model::{io as model_io, FittedNetwork};
use beliefnet::Execution;

use crate::cli::{Cli, Command};
use crate::config::ProjectConfig;
use crate::error::{CliError, CliResult};
use crate::manifest::{Clock, InputRecord, RunManifest, SeedSource};
use crate::workspace::{check_name, Staged, Workspace};

/// Everything a command needs besides its own arguments.
pub struct Context {
    pub ws: Workspace,
    pub config: ProjectConfig,
    pub config_text: Option<String>,
    /// Directory that relative config paths resolve against.
    pub config_dir: PathBuf,
    pub seed_flag: Option<u64>,
    pub threads: Option<usize>,
    pub exec: Execution,
    pub force: bool,
    pub argv: Vec<String>,
    pub clock: Clock,
}

impl Context {
    pub fn new(cli: &Cli, argv: Vec<String>) -> CliResult<Self> {
        let (config_path, explicit) = match &cli.config {
            Some(p) => (p.clone(), true),
            None => (cli.workspace.join("project.toml"), false),
        };
        let (config, config_text) = if explicit || config_path.exists() {
            let (c, t) = ProjectConfig::load(&config_path)?;
            (c, Some(t))
        } else {
            (ProjectConfig::default(), None)
        };
        let config_dir = config_path.parent().map(Path::to_path_buf).unwrap_or_default();
        let exec = match cli.threads {
            Some(0) => return Err(CliError::usage("--threads must be at least 1")),
            Some(1) => Execution::Sequential,
            Some(_) => Execution::Parallel,
            None => Execution::default(),
        };
        Ok(Context {
            ws: Workspace::open(&cli.workspace)?,
            config,
            config_text,
            config_dir,
            seed_flag: cli.seed,
            threads: cli.threads,
            exec,
            force: cli.force,
            argv,
            clock: Clock::start(!cli.no_timestamp),
        })
    }

    /// Master seed: `--seed`, then the config, then fresh entropy.
    pub fn seed(&self) -> (u64, SeedSource) {
        if let Some(s) = self.seed_flag {
            (s, SeedSource::Flag)
        } else if let Some(s) = self.config.seed {
            (s, SeedSource::Config)
        } else {
            (rand::random(), SeedSource::Entropy)
        }
    }

    pub fn manifest(&self, command: &str) -> RunManifest {
        RunManifest {
            command: command.into(),
            argv: self.argv.clone(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            seed: None,
            seed_source: None,
            threads: self.threads,
            config: self.config_text.clone(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            details: Default::default(),
            started_at: None,
            elapsed_ms: None,
        }
    }

    /// Record outputs, append the manifest and write everything.
    pub fn finish(&self, mut staged: Staged, manifest_path: PathBuf, mut manifest: RunManifest) -> CliResult<()> {
        manifest.outputs = staged.paths().map(|p| self.ws.relative(p)).collect();
        manifest.outputs.push(self.ws.relative(&manifest_path));
        self.clock.stamp(&mut manifest);
        staged.add(manifest_path, manifest.to_json());
        staged.check(self.force)?;
        for p in staged.paths() {
            log::info!("writing {}", p.display());
        }
        staged.commit()
    }

    pub fn timestamp(&self) -> Option<&str> {
        self.clock.started_at()
    }

    /// Encoded table `data/<name>.csv` with its dictionary.
    pub fn load_table(&self, name: &str) -> CliResult<(DataTable, Vec<InputRecord>)> {
        check_name("table", name)?;
        let csv = self.ws.data(&format!("{name}.csv"));
        let dict = self.ws.data(&format!("{name}.dict.toml"));
        for p in [&csv, &dict] {
            if !p.exists() {
                return Err(CliError::usage(format!(
                    "{} not found; run `beliefnet prep` first",
                    p.display()
                )));
            }
        }
        let table = data::io::load_table(&csv, &dict)?;
        let inputs = vec![
            InputRecord::of_file(&csv, Some(table.n_rows()))?,
            InputRecord::of_file(&dict, None)?,
        ];
        Ok((table, inputs))
    }

    /// Fitted network `models/<name>.toml`.
    pub fn load_model(&self, name: &str) -> CliResult<(FittedNetwork, InputRecord)> {
        check_name("model", name)?;
        let path = self.ws.model(&format!("{name}.toml"));
        if !path.exists() {
            return Err(CliError::usage(format!(
                "{} not found; run `beliefnet learn` first",
                path.display()
            )));
        }
        let net = model_io::load(&path)?;
        Ok((net, InputRecord::of_file(&path, None)?))
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.config_dir.join(path)
        }
    }
}

/// File-name fragment for a variable or level label.
pub fn file_token(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn run(cli: &Cli, argv: Vec<String>) -> CliResult<()> {
    let ctx = Context::new(cli, argv)?;
    match &cli.command {
        Command::Prep(a) => prep::run(&ctx, a),
        Command::Learn(a) => learn::learn(&ctx, a),
        Command::Fit(a) => learn::fit(&ctx, a),
        Command::Query(a) => analyze::query(&ctx, a),
        Command::Sobol(a) => analyze::sobol(&ctx, a),
        Command::Scenario(a) => analyze::scenario(&ctx, a),
        Command::Sensitivity(a) => analyze::sensitivity(&ctx, a),
        Command::Export(a) => analyze::export(&ctx, a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_are_file_safe() {
        assert_eq!(file_token("Don't know"), "Don_t_know");
        assert_eq!(file_token("14-29"), "14-29");
    }
}
