//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on a mathematical argument was violated.
    #[error("domain error: {0}")]
    Domain(String),
    /// Two fields live on different grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    /// NaN/Inf showed up, or a validity monitor tripped.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// A rate fit could not be performed.
    #[error("fit error: {0}")]
    Fit(String),
    /// Configuration file is malformed or violates a constraint.
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
