use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field order must be at least 2, got {0}")]
    InvalidFieldOrder(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("field orders differ: q={left} vs q={right}")]
    FieldMismatch { left: u64, right: u64 },

    #[error("series exponential needs a zero constant term")]
    NonZeroConstantTerm,

    #[error("expected a nonnegative integer in {context}, got {value}")]
    NotNatural { context: String, value: String },

    #[error("{left} = {lvalue} but {right} = {rvalue}")]
    Disagreement {
        left: String,
        lvalue: String,
        right: String,
        rvalue: String,
    },

    #[error("scale guard: {what} needs {size} steps, limit is {limit}")]
    ScaleGuard {
        what: String,
        size: String,
        limit: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
