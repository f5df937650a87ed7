//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced while parsing inputs or computing analyses.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input data. `location` names the file and
    /// line, or the question id, that triggered the error.
    #[error("{location}: {message}")]
    Data { location: String, message: String },

    /// A caller violated an operation's precondition (dimension mismatch,
    /// zero step, empty sample set, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A metric has no defined value for the given inputs.
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    /// A correlation coefficient has no defined value (constant series or
    /// fewer than two samples).
    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(String),

    /// A rewriting-impact fraction has no defined value (zero denominator).
    #[error("undefined fraction: {0}")]
    UndefinedFraction(String),

    /// Strict-mode corpus validation failed.
    #[error("validation failed: {0}")]
    Validation(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn data(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Data {
            location: location.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
