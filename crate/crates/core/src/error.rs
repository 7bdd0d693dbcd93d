//! Crate error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed instance (empty want-set, packet index out of range, ...).
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// Text-format parse failure; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A generator could not produce an instance for the given parameters.
    #[error("generator: {0}")]
    Generator(String),

    /// Caller violated a documented precondition.
    #[error("precondition: {0}")]
    Precondition(String),

    /// Exhaustive search refused: instance exceeds the feasibility guard.
    #[error("search guard exceeded: {0}")]
    GuardExceeded(String),

    /// Confirmation run over an independent coefficient stream disagreed,
    /// i.e. a random-coefficient rank fluke affected the result.
    #[error("rank anomaly: {0}")]
    RankAnomaly(String),
}

impl Error {
    pub(crate) fn invalid_instance(msg: impl Into<String>) -> Self {
        Error::InvalidInstance(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
