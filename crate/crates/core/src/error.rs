//! Error type shared across the library.

use thiserror::Error;

/// Errors produced while building representations, bases, or reports.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid representation sizes (parity, coprimality, bounds).
    #[error("invalid representation parameters: {0}")]
    InvalidParams(String),

    /// A dense linear-algebra routine failed (singular matrix, no convergence).
    #[error("linear algebra failure: {0}")]
    Linalg(String),

    /// The sampled parameters violate a regularity assumption
    /// (degenerate separate-variable grid, multiple eigenvalue, ...).
    #[error("regularity failure: {0}")]
    Regularity(String),

    /// A numerical construction did not reach the required consistency
    /// (collinearity defect, branch mismatch, labeling failure).
    #[error("construction failure: {0}")]
    Construction(String),

    /// Configuration file problems.
    #[error("config error: {0}")]
    Config(String),

    /// Report serialization problems.
    #[error("report error: {0}")]
    Report(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Linalg(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Report(e.to_string())
    }
}

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
