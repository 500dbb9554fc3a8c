//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("basis states belong to different system sizes ({0} vs {1} spins)")]
    SizeMismatch(usize, usize),

    #[error("system size {n} outside supported range ({min}..={max} spins): {context}")]
    SizeOutOfRange {
        n: usize,
        min: usize,
        max: usize,
        context: &'static str,
    },

    #[error("superposition collapsed to the zero vector (a = b with beta = -alpha)")]
    DegenerateState,

    #[error("identical branches have no C-spin cluster to decompose")]
    NoCluster,

    #[error("spin index {index} outside 1..={n}")]
    SpinIndexError { index: usize, n: usize },

    #[error("invalid bipartition: {0}")]
    PartitionError(String),

    #[error("inconsistent order parameters: q_ea = {q} < tol but |m| = {m_abs} >= tol")]
    InconsistentInputs { m_abs: f64, q: f64 },

    #[error("validation failed: {0}")]
    ValidationFailure(String),

    #[error("invalid ket string {ket:?}: {reason}")]
    InvalidKet { ket: String, reason: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
