use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid direction `{input}`: {reason}")]
    InvalidDirection { input: String, reason: String },

    /// The adaptive rule ran out of panels before reaching the tolerance.
    #[error(
        "quadrature budget exhausted after {panels} panels: estimate {estimate} with error {error_estimate:e} (tolerance {tolerance:e})"
    )]
    QuadratureBudget {
        estimate: f64,
        error_estimate: f64,
        tolerance: f64,
        panels: usize,
    },

    #[error("tie in column {column} at rows {rows:?}")]
    Tie { column: usize, rows: Vec<usize> },

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("malformed data: {0}")]
    Data(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    /// Failure inside one replication of a Monte Carlo run.
    #[error("replication {replication} at n = {n}: {source}")]
    Replication {
        n: usize,
        replication: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
