use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    /// A malformed line in one of the text formats. `line` is 1-based.
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("duplicate id `{0}`")]
    DuplicateId(String),

    #[error("no prediction for id `{0}`")]
    MissingId(String),

    #[error("unexpected id `{0}`")]
    UnexpectedId(String),

    #[error("length mismatch: {gold} gold labels vs {pred} predictions")]
    LengthMismatch { gold: usize, pred: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot train: {0}")]
    Training(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by the caller's configuration rather than by
    /// the contents of an input file.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::InvalidArgument(_))
    }
}
