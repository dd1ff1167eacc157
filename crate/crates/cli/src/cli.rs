//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use beliefnet::learn::ScoreKind;

#[derive(Debug, Parser)]
#[command(
    name = "beliefnet",
    version,
    about = "Discrete Bayesian networks for categorical survey data"
)]
pub struct Cli {
    /// Workspace directory holding data/, models/, strengths/ and reports/.
    #[arg(long, global = true, env = "BELIEFNET_WORKSPACE", default_value = ".")]
    pub workspace: PathBuf,

    /// Project config; defaults to <workspace>/project.toml.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Master seed; overrides `seed` in the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads for bootstrap and analysis fan-out (1 runs sequentially).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Overwrite existing outputs.
    #[arg(long, global = true)]
    pub force: bool,

    /// Omit wall-clock fields from manifests and SVGs.
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    /// Log more (repeat for debug output).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recode a raw survey export into the full, risk and opportunity tables.
    Prep(PrepArgs),
    /// Learn a consensus structure and fit its parameters.
    Learn(LearnArgs),
    /// Refit the parameters of a model's structure on a table.
    Fit(FitArgs),
    /// Conditional distribution tables.
    Query(QueryArgs),
    /// First-order Sobol index matrix.
    Sobol(SobolArgs),
    /// Posteriors under the configured scenarios.
    Scenario(ModelArgs),
    /// Tornado bars, parameter slopes and node influence.
    Sensitivity(SensitivityArgs),
    /// Graphviz DOT of a model's structure.
    Export(ModelArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Prep(_) => "prep",
            Command::Learn(_) => "learn",
            Command::Fit(_) => "fit",
            Command::Query(_) => "query",
            Command::Sobol(_) => "sobol",
            Command::Scenario(_) => "scenario",
            Command::Sensitivity(_) => "sensitivity",
            Command::Export(_) => "export",
        }
    }
}

#[derive(Debug, Args)]
pub struct PrepArgs {
    /// Raw CSV; overrides `prep.raw`.
    #[arg(long)]
    pub raw: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScoreArg {
    Aic,
    Bic,
    Loglik,
}

impl From<ScoreArg> for ScoreKind {
    fn from(s: ScoreArg) -> Self {
        match s {
            ScoreArg::Aic => ScoreKind::Aic,
            ScoreArg::Bic => ScoreKind::Bic,
            ScoreArg::Loglik => ScoreKind::LogLik,
        }
    }
}

#[derive(Debug, Args)]
pub struct LearnArgs {
    /// Table name under data/.
    #[arg(long, default_value = "full")]
    pub data: String,
    /// Bootstrap replicates; 0 learns from a single search.
    #[arg(long)]
    pub bootstrap: Option<usize>,
    /// Fixed inclusion threshold.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, value_enum)]
    pub score: Option<ScoreArg>,
    /// Model name; defaults to the table name.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Model whose structure is kept.
    #[arg(long)]
    pub model: String,
    #[arg(long, default_value = "full")]
    pub data: String,
    /// Dirichlet pseudo-count; overrides `learn.alpha`.
    #[arg(long, conflicts_with = "mle")]
    pub alpha: Option<f64>,
    /// Maximum-likelihood estimates instead of the Dirichlet posterior mean.
    #[arg(long)]
    pub mle: bool,
    #[arg(long)]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, default_value = "full")]
    pub model: String,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[arg(long, default_value = "full")]
    pub model: String,
    /// Query target; replaces the configured queries.
    #[arg(long)]
    pub target: Option<String>,
    /// Variables swept level by level.
    #[arg(long = "by", requires = "target")]
    pub by: Vec<String>,
}

#[derive(Debug, Args)]
pub struct SobolArgs {
    #[arg(long, default_value = "full")]
    pub model: String,
    /// Targets; replaces `sobol.targets`.
    #[arg(long = "target")]
    pub targets: Vec<String>,
}

#[derive(Debug, Args)]
pub struct SensitivityArgs {
    #[arg(long, default_value = "full")]
    pub model: String,
    /// Event variable; replaces the configured requests.
    #[arg(long, requires = "state")]
    pub target: Option<String>,
    #[arg(long, requires = "target")]
    pub state: Option<String>,
    /// Evidence as `Variable=Level`.
    #[arg(long = "given", requires = "target")]
    pub given: Vec<String>,
    /// Perturbation size.
    #[arg(long, requires = "target")]
    pub delta: Option<f64>,
}
