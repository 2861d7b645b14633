use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("group too large or infinite (cap {cap} exceeded)")]
    CapExceeded { cap: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unknown group name: {0}")]
    UnknownGroup(String),
    #[error("element does not normalize the group")]
    NotNormalizing,
    #[error("element has infinite order (no power equal to identity up to {0})")]
    InfiniteOrder(usize),
    #[error("automorphism is not W-full (dim V^tau = {dim}, delta = {delta})")]
    NotFull { dim: usize, delta: usize },
    #[error("parameter k is missing hyperplane orbit {0}")]
    MissingOrbit(usize),
    #[error("inputs not Poisson-compatible (commutator not divisible by t)")]
    NotPoissonCompatible,
    #[error("bound too large: {0}")]
    BoundTooLarge(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
