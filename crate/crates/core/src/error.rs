use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown node id {0}")]
    UnknownNode(usize),

    #[error("unknown label '{0}'")]
    UnknownLabel(String),

    #[error("self-loop on node '{0}'")]
    SelfLoop(String),

    #[error("negative or non-finite weight {weight} on edge {src} -> {dst}")]
    InvalidWeight {
        src: String,
        dst: String,
        weight: f64,
    },

    #[error("duplicate edge {src} -> {dst}")]
    DuplicateEdge { src: String, dst: String },

    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse(source_name: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.to_string(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
