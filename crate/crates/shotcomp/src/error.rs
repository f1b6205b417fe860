use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(shotcomp_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed JSON: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("infeasible request: {0}")]
    Infeasible(String),
}

impl From<shotcomp_core::Error> for Error {
    fn from(e: shotcomp_core::Error) -> Self {
        match e {
            shotcomp_core::Error::BudgetExceeded { .. } => Error::Infeasible(e.to_string()),
            other => Error::Core(other),
        }
    }
}

impl Error {
    /// Process exit status: 1 config, 2 I/O, 3 infeasible.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Core(_) | Error::Json { .. } => 1,
            Error::Io { .. } => 2,
            Error::Infeasible(_) => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
