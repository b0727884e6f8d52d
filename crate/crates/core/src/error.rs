use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed CoNLL-U input.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Well-formed CoNLL-U that references nodes which do not exist.
    #[error("line {line}: {message}")]
    Validation { line: usize, message: String },

    /// Malformed relation label or node identifier.
    #[error("{0}")]
    Format(String),

    /// Malformed word-vector file.
    #[error("embeddings line {line}: {message}")]
    Embeddings { line: usize, message: String },

    /// Two documents that should be comparable are not.
    #[error("{0}")]
    Input(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
