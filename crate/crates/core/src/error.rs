use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The caller supplied data that violates a precondition.
    #[error("input error: {0}")]
    Input(String),
    /// The instance is too small (or too large) for the requested profile.
    #[error("capacity error: {0}")]
    Capacity(String),
    /// A certificate or replay step failed its check.
    #[error("validation failure: {0}")]
    Validation(String),
    /// An invariant that should hold by construction was violated.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn internal<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Internal(msg.into()))
}

pub(crate) fn capacity<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Capacity(msg.into()))
}
