use std::path::PathBuf;

use regresslab_core::Error as CoreError;

/// Failures surfaced by the command-line tool.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: row {row}, column '{column}': {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        column: String,
        message: String,
    },
    #[error("{0}")]
    Schema(String),
    #[error("config: {0}")]
    Config(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("gradient check failed for: {0}")]
    GradcheckFailed(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 3 for numerical failures, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::GradcheckFailed(_) => 3,
            _ => 2,
        }
    }
}
