use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed PGM ({path}): {reason}")]
    PgmFormat { path: PathBuf, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("feature cache error ({path}): {reason}")]
    Cache { path: PathBuf, reason: String },

    #[error("descriptor kind mismatch: {0}")]
    KindMismatch(String),

    #[error("degenerate geometry: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn pgm(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Error::PgmFormat {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
