use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("format error: {0}")]
    Format(String),
    #[error("parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("extractor error: {0}")]
    Extractor(String),
    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),
    #[error("training diverged at step {step}: {msg}")]
    Training { step: usize, msg: String },
    #[error("candidate `{name}`: {source}")]
    Candidate {
        name: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error: 1 for I/O failures, 2 for anything
    /// caused by invalid input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 1,
            Error::Candidate { source, .. } => source.exit_code(),
            _ => 2,
        }
    }
}
