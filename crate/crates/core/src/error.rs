use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration, shape mismatch, or unsupported combination.
    #[error("configuration error: {0}")]
    Config(String),

    /// An operator was applied outside the set where it is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("checkpoint error at byte {offset}: {message}")]
    Checkpoint { offset: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
