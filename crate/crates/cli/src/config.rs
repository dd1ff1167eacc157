//! `project.toml`: the single configuration file read by every command.
//! The schema is documented in `docs/config.md`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use beliefnet::analysis::{ScenarioDef, DEFAULT_DELTA};
use beliefnet::data::{PopulationSplit, ThemeSpec, UnmappedPolicy, VariableRecode, DEFAULT_MIN_COUNT};
use beliefnet::learn::{ScoreKind, TabuConfig, Tier, DEFAULT_REPLICATES};
use beliefnet::model::Evidence;

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectConfig {
    /// Master seed used when `--seed` is absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prep: Option<PrepConfig>,
    #[serde(default)]
    pub learn: LearnConfig,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub query: Vec<QueryConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sobol: Option<SobolConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenarios: Option<ScenarioConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sensitivity: Vec<SensitivityConfig>,
}

/// Which subpopulation a theme belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Population {
    Risk,
    Opportunity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThemeConfig {
    pub name: String,
    pub members: Vec<String>,
    #[serde(default = "default_positive")]
    pub positive: String,
    pub population: Population,
}

impl ThemeConfig {
    pub fn spec(&self) -> ThemeSpec {
        ThemeSpec {
            name: self.name.clone(),
            members: self.members.clone(),
            positive: self.positive.clone(),
        }
    }
}

fn default_positive() -> String {
    "Mentioned".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrepConfig {
    /// Raw survey CSV, relative to the config file.
    pub raw: PathBuf,
    /// Variables kept in every output table.
    pub variables: Vec<String>,
    #[serde(default)]
    pub unmapped: UnmappedPolicy,
    #[serde(default = "default_min_count")]
    pub min_count: usize,
    /// Variables passed through the rare-level collapse; defaults to
    /// `variables`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collapse: Option<Vec<String>>,
    #[serde(default)]
    pub variable: Vec<VariableRecode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub theme: Vec<ThemeConfig>,
    /// When present, risk and opportunity tables are written as well.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<PopulationSplit>,
}

fn default_min_count() -> usize {
    DEFAULT_MIN_COUNT
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LearnConfig {
    pub score: ScoreKind,
    /// Bootstrap replicates; 0 learns one DAG from the full table.
    pub bootstrap: usize,
    /// Dirichlet pseudo-count for the final parameter fit.
    pub alpha: f64,
    /// Fixed inclusion threshold; estimated from the strengths when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    pub tabu: TabuConfig,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tier: Vec<Tier>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub forbid: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub require: Vec<(String, String)>,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig {
            score: ScoreKind::Aic,
            bootstrap: DEFAULT_REPLICATES,
            alpha: 1.0,
            threshold: None,
            tabu: TabuConfig::default(),
            tier: Vec::new(),
            forbid: Vec::new(),
            require: Vec::new(),
        }
    }
}

/// One conditional-probability table: the target's baseline followed by one
/// row per level of each evidence variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryConfig {
    pub target: String,
    #[serde(default)]
    pub evidence: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SobolConfig {
    pub targets: Vec<String>,
    /// Defaults to every model variable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inputs: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub targets: Vec<String>,
    pub scenario: Vec<ScenarioDef>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensitivityConfig {
    pub target: String,
    pub state: String,
    #[serde(default)]
    pub evidence: Evidence,
    /// Nodes whose parameters are perturbed; defaults to the ancestors of the
    /// target and evidence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<String>>,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_max_bars")]
    pub max_bars: usize,
    /// Influence shade at the maximum.
    #[serde(default = "default_color")]
    pub color: String,
}

fn default_delta() -> f64 {
    DEFAULT_DELTA
}

/// Bars drawn in a tornado chart.
pub const DEFAULT_MAX_BARS: usize = 20;

/// Shade of the most influential node.
pub const DEFAULT_INFLUENCE_COLOR: &str = "#d73027";

fn default_max_bars() -> usize {
    DEFAULT_MAX_BARS
}

fn default_color() -> String {
    DEFAULT_INFLUENCE_COLOR.into()
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(before.len(), |nl| before.len() - nl - 1) + 1;
    (line, col)
}

impl ProjectConfig {
    /// Parse `text`; errors name `origin` with line and column.
    pub fn parse(text: &str, origin: &Path) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| {
            let at = e
                .span()
                .map(|s| {
                    let (l, c) = line_col(text, s.start);
                    format!(":{l}:{c}")
                })
                .unwrap_or_default();
            CliError::usage(format!("{}{at}: {}", origin.display(), e.message()))
        })
    }

    /// Read and parse; returns the config and its raw text.
    pub fn load(path: &Path) -> CliResult<(Self, String)> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        Ok((Self::parse(&text, path)?, text))
    }
}
