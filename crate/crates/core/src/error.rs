//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by oracles, model fitting and the benchmark harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The oracle's evaluation budget is spent; no further queries are served.
    #[error("evaluation budget of {budget} exhausted")]
    BudgetExhausted { budget: usize },

    /// A vector argument does not match the problem dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A value dataset was required to be non-empty.
    #[error("value dataset is empty")]
    EmptyValueDataset,

    /// An input that must be strictly positive was not.
    #[error("{name} must be positive, got {value}")]
    NonPositiveInput { name: &'static str, value: f64 },

    /// A trace with at least one completed outer iteration was required.
    #[error("trace has no completed outer iterations")]
    EmptyTrace,

    /// Profile aggregation received tables over different problem sets.
    #[error("profile tables cover mismatched problem sets")]
    MismatchedProblemSets,

    /// Configuration (solver parameters or experiment file) is invalid.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A surrogate model could not be fitted to the current datasets.
    #[error("surrogate fit failed: {0}")]
    FitFailed(String),

    /// An output artifact could not be written.
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
