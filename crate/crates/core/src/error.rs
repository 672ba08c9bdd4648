use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("chain is periodic: {0}")]
    Periodic(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("numeric instability: {0}")]
    NumericInstability(String),
    #[error("singular linear system: {0}")]
    Singular(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
