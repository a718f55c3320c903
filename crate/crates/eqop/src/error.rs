use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("bound exceeded: {0}")]
    Bound(String),
    #[error("bound mismatch: {0}")]
    BoundMismatch(String),
    #[error("search budget exhausted: {needed} candidates against a budget of {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("schema error at {path}: {msg}")]
    Schema { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
