use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] qtopt::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: unsupported image format ({detail})")]
    UnsupportedFormat { path: PathBuf, detail: String },
    #[error("{path}: corrupt image ({detail})")]
    CorruptImage { path: PathBuf, detail: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("serialisation error: {0}")]
    Serde(String),
    #[error("result store: {0}")]
    Store(String),
}

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    /// Process exit status: 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Core(qtopt::Error::InvalidConfig(_) | qtopt::Error::UnknownAlgorithm(_)) => 2,
            _ => 1,
        }
    }
}

impl From<serde_json::Error> for HarnessError {
    fn from(e: serde_json::Error) -> Self {
        Self::Serde(e.to_string())
    }
}

impl From<csv::Error> for HarnessError {
    fn from(e: csv::Error) -> Self {
        Self::Serde(e.to_string())
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
