//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong in the laboratory.
///
/// The harness maps variants onto process exit codes: configuration and
/// input problems exit with 1, numerical failures with 2, invariant
/// violations detected mid-run with 3.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The requested system exceeds the dense-matrix guard rail.
    #[error("system too large: {0}")]
    Oversize(String),

    /// An iterative method failed to converge or produced non-finite output.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A structural invariant (commutation, Hermiticity, ...) does not hold.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical(_) => 2,
            Error::Invariant(_) => 3,
            _ => 1,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
