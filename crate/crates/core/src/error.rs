//! Crate-wide error type. Enumeration caps are first-class errors so callers
//! can distinguish "too big to enumerate" from a genuine failure.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An enumeration would visit more points than the configured cap.
    CapExceeded { needed: u128, cap: u64, what: String },
    /// Invalid configuration: bad quiver spec, non-prime field size, etc.
    Config(String),
    /// An interpolation or cross-check failed. These indicate a real
    /// inconsistency and are never silently ignored.
    Inconsistent(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::CapExceeded { needed, cap, what } => {
                write!(f, "enumeration cap exceeded: {what} needs {needed} points, cap is {cap}")
            }
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
            Error::Inconsistent(msg) => write!(f, "consistency check failed: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
