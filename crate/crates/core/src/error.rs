use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The requested quantity depends on data the descriptor does not carry.
    #[error("undetermined: {0}")]
    Undetermined(String),
    /// Two independent computations disagreed. Always a bug.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
