use std::path::{Path, PathBuf};

use radialwave::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    /// 2 for anything wrong with the request, 1 for a run that went wrong.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                Error::InvalidParams(_) | Error::UnsupportedParams(_) | Error::Parse(_) | Error::Io(_) => 2,
                Error::Domain(_)
                | Error::PathSingular(_)
                | Error::Compatibility { .. }
                | Error::NonMonotone(_)
                | Error::InsufficientWindow { .. } => 1,
            },
        }
    }
}

pub fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
