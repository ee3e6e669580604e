use thiserror::Error;

/// Errors raised by the construction and verification pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero in GF(2^n)")]
    DivisionByZero,

    #[error("invalid extension degree {0}: {1}")]
    InvalidDegree(u32, &'static str),

    #[error("modulus {modulus:#b} is not an irreducible polynomial of degree {degree}")]
    ReducibleModulus { modulus: u32, degree: u32 },

    #[error("field element {0:#x} is out of range")]
    ElementOutOfRange(u32),

    #[error("parameter must be a nonzero field element")]
    ZeroParameter,

    #[error("empty index set")]
    EmptyIndexSet,

    #[error("index {0} out of range")]
    IndexOutOfRange(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// An identity that holds for every valid construction failed; this
    /// always indicates a bug rather than bad input.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
