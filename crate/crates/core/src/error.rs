use crate::cache::CacheError;
use crate::http::{ConfigError, TransportError};
use crate::version::VersionError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid package name {0:?}")]
    InvalidName(String),
    #[error("package {0:?} not found on the registry")]
    NotFound(String),
    #[error("rate limited by {url}; retry later")]
    RateLimited { url: String },
    #[error("network error: {0}")]
    Network(String),
    #[error("malformed response from {url}: {reason}")]
    Malformed { url: String, reason: String },
    #[error("offline mode and no fresh cache record for {0}")]
    OfflineMiss(String),
    #[error(transparent)]
    Version(#[from] VersionError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cache i/o on {path}: {source}")]
    Cache {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    /// Stable name of the error variant, for scripts and bindings.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::InvalidName(_) => "InvalidName",
            Self::NotFound(_) => "NotFound",
            Self::RateLimited { .. } => "RateLimited",
            Self::Network(_) => "Network",
            Self::Malformed { .. } => "Malformed",
            Self::OfflineMiss(_) => "OfflineMiss",
            Self::Version(VersionError::NoMatch(_)) => "NoMatch",
            Self::Version(VersionError::AllYanked(_)) => "AllYanked",
            Self::Version(VersionError::InvalidRequest(_)) => "InvalidVersionRequest",
            Self::Config(_) => "Config",
            Self::Cache { .. } => "Cache",
        }
    }
}

impl From<TransportError> for Error {
    fn from(e: TransportError) -> Self {
        Self::Network(e.to_string())
    }
}

impl From<CacheError> for Error {
    fn from(e: CacheError) -> Self {
        match e {
            CacheError::OfflineMiss(url) => Self::OfflineMiss(url),
            CacheError::Transport(t) => t.into(),
            CacheError::Io { path, source } => Self::Cache { path, source },
        }
    }
}
