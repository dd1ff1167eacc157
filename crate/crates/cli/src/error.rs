use std::path::{Path, PathBuf};

/// Failures of a command, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad invocation or configuration (exit code 1).
    #[error("{0}")]
    Usage(String),

    /// Data or model problem reported by the library (exit code 2).
    #[error(transparent)]
    Core(#[from] beliefnet::Error),

    /// Filesystem failure (exit code 2).
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Input data unfit for the command (exit code 2).
    #[error("{0}")]
    Data(String),

    /// Workspace problem such as a held lock (exit code 2).
    #[error("{0}")]
    Workspace(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 1 for usage and configuration errors, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(beliefnet::Error::InvalidConfig(_)) => 1,
            _ => 2,
        }
    }
}
