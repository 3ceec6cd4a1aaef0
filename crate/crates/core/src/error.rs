use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid matrix set: {0}")]
    InvalidSet(String),

    #[error("mode index {index} out of range for a set of {modes} modes")]
    InvalidIndex { index: usize, modes: usize },

    #[error("horizon too large: {count} products at length {horizon} exceed the cap of {cap}")]
    HorizonTooLarge {
        horizon: usize,
        count: u128,
        cap: u64,
    },

    #[error("cone inapplicable: {0}")]
    ConeInapplicable(String),

    #[error("uncertified dimension {0}: this operation requires d = 2")]
    UnsupportedDimension(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("overflow guard: {0}")]
    Overflow(String),

    #[error("lambda not certifiable: {0}")]
    NotCertifiable(String),

    #[error("node cap of {0} exceeded")]
    NodeCapExceeded(usize),

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("singular matrix")]
    Singular,
}

pub type Result<T> = std::result::Result<T, Error>;
