use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("config line {line}: {message}")]
    ConfigFile { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed table file at line {line}: {message}")]
    TableFormat {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Solver(#[from] smp_control::Error),

    #[error("{count} grid points hit the inner iteration limit")]
    IterationLimit { count: usize },
}

impl CliError {
    /// Process exit code for this failure class.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::IterationLimit { .. } => 1,
            CliError::Usage(_) | CliError::ConfigFile { .. } => 2,
            CliError::Solver(e) => match e.root() {
                smp_control::Error::IterationLimitExceeded { .. } => 1,
                smp_control::Error::InvalidArgument(_) | smp_control::Error::Unknown { .. } => 2,
                _ => 3,
            },
            CliError::Io { .. } | CliError::TableFormat { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
