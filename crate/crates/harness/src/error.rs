use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_RUN_FAILED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },

    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Invalid(Vec<String>),

    #[error("output directory {} is not empty (use --force to overwrite)", .0.display())]
    OutputExists(PathBuf),

    #[error("{}: {message}", path.display())]
    History { path: PathBuf, message: String },

    #[error("histories disagree on {}", .0.join(", "))]
    Mismatch(Vec<String>),

    #[error("no history files given")]
    NoHistories,

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Io { .. } => EXIT_RUN_FAILED,
            _ => EXIT_INVALID,
        }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
