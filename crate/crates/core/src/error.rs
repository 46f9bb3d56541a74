use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Parameters outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed call, e.g. too few sets or a zero sample count.
    #[error("usage error: {0}")]
    Usage(String),

    /// Family file could not be parsed.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An operation's input violated a stated precondition.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Two independent routes disagreed.
    #[error("inconsistent results: {0}")]
    Inconsistent(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
