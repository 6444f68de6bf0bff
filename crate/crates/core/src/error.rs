use std::io;

use thiserror::Error;

/// Errors produced by the engine. The CLI maps these onto its exit-status
/// taxonomy: usage (1), format (2), alignment (3), internal (4).
#[derive(Debug, Error)]
pub enum Error {
    #[error("category parse error: {0}")]
    Category(String),

    #[error("{file}:{line}: {msg}")]
    Format {
        file: String,
        line: usize,
        msg: String,
    },

    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn format(file: impl Into<String>, line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            file: file.into(),
            line,
            msg: msg.into(),
        }
    }

    pub fn io(path: impl Into<String>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Exit status used by the command-line frontend.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Category(_) | Error::Format { .. } => 2,
            Error::Alignment(_) => 3,
            Error::Io { .. } | Error::Internal(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
