use std::io;
use std::path::PathBuf;

use mmd_core::Error as CoreError;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 usage, 3 infeasible, 4 budget exceeded, 5 io.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } => 2,
            CliError::Core(e) => match e {
                CoreError::Infeasible { .. }
                | CoreError::NoFeasibleTrotterSteps
                | CoreError::AngleExceedsPhi { .. }
                | CoreError::FitResidual(_)
                | CoreError::NotCompletelyPositive(_) => 3,
                CoreError::BudgetExceeded { .. } => 4,
                _ => 2,
            },
            CliError::Io { .. } | CliError::Csv(_) | CliError::Json(_) => 5,
        }
    }
}
