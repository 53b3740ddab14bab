use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Caller supplied arguments outside an operation's domain.
    #[error("usage error: {0}")]
    Usage(String),
    /// Attempted to invert zero in a finite field.
    #[error("division by zero in GF({0})")]
    DivisionByZero(u64),
    /// An input object failed an operation's structural contract.
    #[error("contract violation: {0}")]
    Contract(String),
    /// A serialized document could not be decoded.
    #[error("malformed document: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}
