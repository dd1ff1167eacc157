use std::path::PathBuf;

/// Errors produced by every stage of the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid variable `{name}`: {reason}")]
    InvalidVariable { name: String, reason: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("unknown level `{level}` for variable `{variable}`")]
    UnknownLevel { variable: String, level: String },

    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    #[error("cycle detected: {}", .0.join(" -> "))]
    CycleDetected(Vec<String>),

    #[error("invalid arc {from} -> {to}: {reason}")]
    InvalidArc { from: String, to: String, reason: String },

    #[error("invalid conditional probability table for `{variable}`: {reason}")]
    InvalidCpt { variable: String, reason: String },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("assignment does not cover variable `{0}`")]
    IncompleteAssignment(String),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("evidence has zero probability{}", scenario_suffix(.scenario))]
    ZeroProbabilityEvidence { scenario: Option<String> },

    #[error("malformed file at line {line}, column {column}: {message}")]
    MalformedFile {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported model format version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("row {0} has the wrong number of cells")]
    RaggedRow(usize),

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("unmapped token `{token}` in variable `{variable}`")]
    UnmappedToken { variable: String, token: String },

    #[error("theme member `{0}` is not a binary variable")]
    NonBinaryMember(String),

    #[error("variable `{variable}` keeps fewer than two levels after collapsing rare levels")]
    DegenerateVariable { variable: String },

    #[error("variable `{0}` is not assigned to any tier")]
    UnassignedVariable(String),

    #[error("variable `{0}` is assigned to more than one tier")]
    DuplicateTierMember(String),

    #[error("unsatisfiable constraints: {0}")]
    UnsatisfiableConstraints(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("bootstrap replicate {index}: {source}")]
    Replicate {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("no arc has positive strength")]
    EmptyStrengths,

    #[error("target `{0}` has zero variance in every state")]
    DegenerateTarget(String),

    #[error("parameter {0} is saturated; proportional co-variation is undefined")]
    SaturatedParameter(String),
}

fn scenario_suffix(scenario: &Option<String>) -> String {
    match scenario {
        Some(s) => format!(" in scenario `{s}`"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
