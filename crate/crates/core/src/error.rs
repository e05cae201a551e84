use thiserror::Error;

use crate::codec::CodecError;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A stated precondition of an operation does not hold for the input.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Neither outcome a lemma guarantees could be produced. This is an
    /// implementation bug signal and must never fire on valid input.
    #[error("lemma-violation: {0}")]
    LemmaViolation(String),

    /// A search ran out of its node or time budget before it could decide.
    #[error("search budget exhausted: {0}")]
    BudgetExceeded(String),

    #[error(transparent)]
    Codec(#[from] CodecError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
