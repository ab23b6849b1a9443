use thiserror::Error;

/// Errors raised by the sequence, family and algebra routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("incompatible spaces: index base {left} vs {right}")]
    BaseMismatch { left: u64, right: u64 },
    #[error("indices must be strictly increasing and >= base {base} (offending index {index})")]
    BadIndex { base: u64, index: u64 },
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid operator: {0}")]
    InvalidOperator(String),
    #[error("operator is not multiplicative: {0}")]
    NotMultiplicative(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal verification failed: {0}")]
    Internal(String),
    #[error("rejected input: {0}")]
    Rejected(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
