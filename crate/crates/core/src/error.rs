use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polynomial term cap exceeded: {terms} terms > cap {cap}")]
    TermCapExceeded { terms: usize, cap: usize },

    #[error("moment sequence too short: need index {needed}, have {available} entries")]
    SequenceTooShort { needed: usize, available: usize },

    /// The right-hand matrix of a pencil failed its positive-definiteness test.
    /// Typically a finitely supported measure with `r` beyond its rank.
    #[error("matrix of order {order} is not positive definite (pivot {index} = {pivot:e})")]
    NotPositiveDefinite {
        order: usize,
        index: usize,
        pivot: f64,
    },

    #[error("not a moment sequence: negative Hankel pivot at index {index}")]
    InvalidMomentSequence { index: usize },

    #[error("Hankel matrix is rank deficient beyond r = {max_valid_r}")]
    RankDeficient { max_valid_r: usize },

    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("matrix size {size} exceeds cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },

    #[error("eigensolver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("pencil residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge { residual: f64, tol: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// True for failures that stem from the numerics rather than from malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveDefinite { .. }
                | Error::RankDeficient { .. }
                | Error::InvalidMomentSequence { .. }
                | Error::NoConvergence { .. }
                | Error::ResidualTooLarge { .. }
        )
    }
}
