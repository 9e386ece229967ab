//! Crate-wide error type.

/// Errors reported by the library.
///
/// Domain errors (bad parameters, mismatched degrees or models, cells outside
/// a diagram) are recoverable caller mistakes. `Internal` marks a violated
/// invariant, e.g. a singular Gram pivot, and indicates a bug.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("cell ({row},{col}) lies outside the diagram")]
    CellOutOfRange { row: usize, col: usize },
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
