use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("resource limit exceeded at (p={p}, w={w}): {detail}")]
    Resource { p: usize, w: i64, detail: String },
    #[error("resource limit exceeded: {0}")]
    Bound(String),
    #[error("search exhausted: {0}")]
    SearchFailure(String),
    #[error("weight is not dominant: {0:?}")]
    NonDominant(Vec<i64>),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("singular Vandermonde system: repeated node {0}")]
    SingularVandermonde(String),
    #[error("generators do not span: first failure at weight {weight}")]
    NotSpanning { weight: u32 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
