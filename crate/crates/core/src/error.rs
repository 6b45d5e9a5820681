//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Dimensions or descriptors of the operands do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Input violates a mathematical precondition (not self-adjoint,
    /// not positive, not a frame, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A Douglas-type factorization problem has no solution; carries the
    /// first violating column of the scalar representation.
    #[error("range inclusion fails at block {block}, column {column} (residual {residual:.3e})")]
    Unsolvable {
        block: usize,
        column: usize,
        residual: f64,
    },

    /// A bound or constant that the caller asked for does not exist.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A certificate refers to a frame that has since changed.
    #[error("stale certificate: frame fingerprint does not match")]
    StaleCertificate,

    /// Malformed JSON input; `path` is a JSON-pointer-style location.
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Bad CLI invocation or unknown suite tag.
    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn parse(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
