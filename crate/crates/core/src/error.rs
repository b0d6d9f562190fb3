use thiserror::Error;

/// Errors produced by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arity mismatch: expected {expected} argument(s), got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("truncation violation: {0}")]
    Truncation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    /// Raised when δ∘δ fails to vanish or a coboundary leaves its stratum.
    /// Never fires on a correct build.
    #[error("inconsistent cochain complex: {0}")]
    InconsistentComplex(String),
}

pub type Result<T> = std::result::Result<T, Error>;
