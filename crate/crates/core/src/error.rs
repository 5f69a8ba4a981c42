use std::path::PathBuf;

use crate::profile::Violation;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("format error in {what}: {message}")]
    Format { what: String, message: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid profile: {}", join_violations(.0))]
    Validation(Vec<Violation>),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("structural error: {0}")]
    Structure(String),

    #[error("replay mismatch: {0}")]
    Replay(String),

    #[error("unmatched ids: {0:?}")]
    UnmatchedIds(Vec<String>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
