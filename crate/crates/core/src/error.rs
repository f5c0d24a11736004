use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported parameters: {0}")]
    UnsupportedParams(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("path crosses a singular set: {0}")]
    PathSingular(String),
    #[error("integration paths disagree: deviation {deviation:e} exceeds {tol:e}")]
    Compatibility { deviation: f64, tol: f64 },
    #[error("inversion requested across a turning point: {0}")]
    NonMonotone(String),
    #[error("insufficient samples for fit: {got} usable, need {need}")]
    InsufficientWindow { got: usize, need: usize },
    #[error("io: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::UnsupportedParams(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
