use thiserror::Error;

/// Errors raised by the library.
///
/// `Usage` covers violated preconditions (shape mismatches, unsupported
/// bundle specs, malformed input files); `Domain` is a mathematically
/// undefined request; `Internal` means an exact consistency check failed
/// and the computation must not continue.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}
