use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the reduction toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty corpus")]
    EmptyCorpus,

    #[error("index {index} out of range for dataset of {len} rows")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("label index {index} out of range for {label_count} labels")]
    LabelOutOfRange { index: usize, label_count: usize },

    #[error("non-finite feature value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("empty cluster")]
    EmptyCluster,

    #[error("partition count exceeds corpus size ({n_d} > {n})")]
    PartitionCountExceedsCorpus { n_d: usize, n: usize },

    #[error("k = {k} is too large for a reference set of {len} instances")]
    KTooLarge { k: usize, len: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("insufficient pairs: {0} non-zero differences, at least 5 required")]
    InsufficientPairs(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(path: impl Into<String>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}
