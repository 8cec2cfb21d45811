use thiserror::Error;

use crate::geometry::ValidationReport;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the arguments was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A packing has overlapping interiors; the report lists every violating pair.
    #[error("packing failed validation: {} overlapping pair(s)", .0.overlaps.len())]
    InvalidPacking(Box<ValidationReport>),

    /// An exhaustive method was asked to run beyond its guard.
    #[error("{what} exceeds limit {limit} (got {actual})")]
    LimitExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    /// A document could not be parsed. `line`/`column` are 1-based.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
