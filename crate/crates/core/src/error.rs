use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-domain input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A configured size cap was exceeded. Nothing is ever truncated.
    #[error("resource limit `{cap}` exceeded (limit {limit})")]
    ResourceLimit { cap: &'static str, limit: usize },
    /// An identity that must hold exactly did not.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
