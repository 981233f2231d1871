use thiserror::Error;

/// Library-wide error type. `Input` signals a violated precondition or
/// malformed data; `Resource` signals that a brute-force fallback exceeded
/// its configured budget (never a silent wrong answer).
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
