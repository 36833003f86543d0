use thiserror::Error;

/// Crate-wide error type.
///
/// `Input` covers malformed or invalid user data, `CheckFailed` a verification
/// that ran to completion and found a counterexample, and `Internal` a broken
/// structural invariant (a bug, never expected on valid input).
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn check(msg: impl Into<String>) -> Self {
        Error::CheckFailed(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
