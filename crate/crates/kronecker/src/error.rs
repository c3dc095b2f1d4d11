use thiserror::Error;

#[derive(Debug, Error)]
pub enum KronError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("representation fault: {0}")]
    Representation(String),
    #[error("deformation search failed: {0}")]
    Deformation(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl KronError {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            KronError::InvalidInput(_) | KronError::Json(_) => 2,
            KronError::ResourceCap(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, KronError>;
