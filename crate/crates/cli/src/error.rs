use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] census_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("output: {0}")]
    Output(#[from] std::io::Error),

    #[error("{path}:{line}: {message}")]
    Config {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    /// 2 for bad input, 3 for a resource cap, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use census_core::Error as E;
        match self {
            CliError::Core(E::ResourceCap(_)) => 3,
            CliError::Core(E::SearchExhausted { .. } | E::Overflow(_)) => 1,
            CliError::Core(_)
            | CliError::Config { .. }
            | CliError::Invalid(_)
            | CliError::Io { .. } => 2,
            CliError::Output(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
