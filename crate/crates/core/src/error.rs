use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("corpus line {line}: {message}")]
    Corpus { line: usize, message: String },

    #[error("questions line {line}: {message}")]
    Questions { line: usize, message: String },

    #[error("trajectory line {line}: {message}")]
    Trajectory { line: usize, message: String },

    #[error("mock script line {line}: {message}")]
    MockScript { line: usize, message: String },

    #[error("unknown document id {0:?}")]
    UnknownDocument(String),

    #[error("index file: {0}")]
    IndexFormat(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("transport error after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },

    #[error("mock backend has no reply scripted for {0}")]
    MockKeyMissing(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("search tree invariant violated: {0}")]
    Invariant(String),

    #[error("report schema mismatch: {0}")]
    Schema(String),
}

impl Error {
    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
