use thiserror::Error;

#[derive(Debug, Error)]
pub enum GloveError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: dimension {dim} is above the cap of {cap}")]
    Capacity { dim: usize, cap: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = GloveError> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(GloveError::Domain(msg.into()))
}
