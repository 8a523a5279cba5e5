use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("common-face axiom violated by cells {first} and {second}: {reason}")]
    Validation { first: usize, second: usize, reason: String },
    #[error("cell {0} is a boundary facet with a single top coface")]
    Boundary(usize),
    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Short machine-readable tag used in JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::DegreeMismatch { .. } => "degree-mismatch",
            Error::Validation { .. } => "validation",
            Error::Boundary(_) => "boundary",
            Error::Parse { .. } => "parse",
        }
    }
}
