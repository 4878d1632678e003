use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("class has zero constant term and is not invertible")]
    NotInvertible,
    #[error("weighted sum needs at least one summand")]
    EmptySum,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("enumeration of {count} items exceeds the guard of {limit}")]
    GuardExceeded { count: String, limit: u64 },
    #[error("dimension {0} unsupported: explicit thresholds are only available for n >= 4")]
    UnsupportedDimension(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
