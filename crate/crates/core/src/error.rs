use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("rank must be at least 2, got {0}")]
    InvalidRank(usize),

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid basis label ({i},{j}): need 1 <= i < j <= {max}")]
    InvalidLabel { i: usize, j: usize, max: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("no binding for variable {0}")]
    MissingBinding(String),

    #[error("denominator vanishes at the given point")]
    SingularPoint,

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
