use thiserror::Error;

/// Errors shared across the crate. Sampled-mode non-answers are *not* errors:
/// a verifier that cannot certify something returns a report saying so.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An exhaustive routine was asked to enumerate past its hard cap
    /// (e.g. edge partitions of a graph with more than 14 edges).
    #[error("combinatorial cap exceeded: {0}")]
    CapExceeded(String),

    /// Malformed text input (edge lists, configs); `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn cap(msg: impl Into<String>) -> Self {
        Error::CapExceeded(msg.into())
    }
}
