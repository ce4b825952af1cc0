use core::fmt;

/// Errors reported by the numerical modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    Domain(&'static str),
    /// The input is structurally valid but statistically degenerate
    /// (zero variance, empty moment, ...).
    Degenerate(&'static str),
    /// Evaluation was requested exactly at a non-removable singularity.
    Singularity(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Degenerate(msg) => write!(f, "degenerate input: {msg}"),
            Error::Singularity(msg) => write!(f, "singularity: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
