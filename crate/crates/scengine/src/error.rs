//! Error types shared across the engine.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    SpecSyntax { pos: usize, msg: String },
    #[error("invalid group spec: {0}")]
    SpecSemantic(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("group order exceeds bound ({bound})")]
    OrderBound { bound: usize },
    #[error("singular matrix")]
    SingularMatrix,
    #[error("class count {got} exceeds bound {bound}")]
    ClassBound { got: usize, bound: usize },
    #[error("orbit count {got} exceeds bound {bound}")]
    OrbitBound { got: usize, bound: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed partition: {0}")]
    Partition(String),
    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
