use std::path::PathBuf;

/// Crate-wide error type.
///
/// The variants correspond to the exit-code classes of the CLI: `Usage` and
/// `Domain` are caller mistakes, `Range` and `Resource` are limits of the
/// current configuration, and `CheckpointMismatch` means a resume was
/// attempted against a checkpoint written for a different run.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("domain: {0}")]
    Domain(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("checkpoint mismatch at {path}: {reason}")]
    CheckpointMismatch { path: PathBuf, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn verification(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }
}
