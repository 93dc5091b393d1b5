//! Crate-wide error type.
//!
//! Every fallible operation returns [`Result`].  Parse errors carry the
//! 1-based line number of the offending input line; size refusals name the
//! bound that was exceeded so callers can tell "too big" apart from "malformed".

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum Error {
    /// Malformed textual input (wire formats, DIMACS, certificates, seeds).
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An exhaustive routine was asked to run beyond its configured bound.
    #[error("size bound exceeded for {what}: limit {limit}, got {got}")]
    SizeBound {
        what: &'static str,
        limit: u64,
        got: u64,
    },

    /// Structural precondition violated (shape mismatch, bad arity, non-prime
    /// modulus, index out of range, ...).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A circuit failed a structural well-formedness rule (as opposed to a
    /// semantic check, which reports `Ok(false)`).
    #[error("structural violation: {0}")]
    Structural(String),

    /// A supplied certificate does not reconstruct the object it claims to.
    #[error("certificate invalid for {role} at {location}: {msg}")]
    Certificate {
        role: &'static str,
        location: String,
        msg: String,
    },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand used by the text-format parsers.
pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
