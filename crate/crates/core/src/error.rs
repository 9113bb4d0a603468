use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the library. Every failure is a validation failure on the
/// caller's input or a refusal to run a computation past its size guard.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside the domain of the operation (non-coprime pair, coefficient
    /// below 2, non-positive integer, ...).
    #[error("invalid input: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// A rotation vector that does not describe a tight structure.
    #[error("invalid rotation vector: {0}")]
    InvalidRotation(String),

    /// Covering degree that does not divide the order of the fundamental group.
    #[error("{degree} does not divide {p}")]
    NotDivisor { p: BigInt, degree: BigInt },

    /// The operation is well defined but would exceed a size guard.
    #[error("computation too large: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn too_large(msg: impl Into<String>) -> Self {
        Error::TooLarge(msg.into())
    }
}
