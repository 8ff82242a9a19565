use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("invalid noise spec: {0}")]
    InvalidSpec(String),
    #[error("unsupported pair {spec} vs {adversary}; supported alternatives: {}", alternatives.join(", "))]
    UnsupportedPair {
        spec: String,
        adversary: String,
        alternatives: Vec<String>,
    },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("density is singular at {0}")]
    Singular(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
