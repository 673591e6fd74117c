use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested family of maps has no members (e.g. surjections onto a
    /// larger space).
    #[error("empty family: no surjective map from dimension {in_dim} onto {out_dim}")]
    EmptyFamily { in_dim: usize, out_dim: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An exhaustive operation would enumerate more objects than its guard allows.
    #[error("size guard: {what} needs 2^{log2_size} objects, limit is 2^{limit}")]
    TooLarge { what: &'static str, log2_size: usize, limit: usize },

    #[error("vectors are linearly dependent")]
    LinearlyDependent,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

/// Largest exponent any exhaustive enumeration may reach.
pub const EXHAUSTIVE_LOG2_LIMIT: usize = 22;

pub(crate) fn guard(what: &'static str, log2_size: usize) -> Result<()> {
    if log2_size > EXHAUSTIVE_LOG2_LIMIT {
        Err(Error::TooLarge { what, log2_size, limit: EXHAUSTIVE_LOG2_LIMIT })
    } else {
        Ok(())
    }
}
