use std::io;

use thiserror::Error;

/// Errors raised by the index and its algorithms.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("index {index} out of bounds (limit {limit})")]
    Bounds { index: usize, limit: usize },

    #[error("k must be at least 3 and at most 63, got {0}")]
    BadOrder(usize),

    #[error("no read is long enough to build an index")]
    EmptyIndex,

    #[error("label has length {got}, expected {expected}")]
    BadLabel { got: usize, expected: usize },

    #[error("corrupt index: {0}")]
    CorruptIndex(String),

    #[error("colorable node rank {0} received no color")]
    IncompleteColoring(usize),

    #[error("node {0} is not colored")]
    NotColored(usize),

    #[error("node {0} is not a starting node")]
    BadStart(usize),

    #[error("threshold must lie in (0, 1], got {0}")]
    BadThreshold(f64),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn bounds(index: usize, limit: usize) -> Error {
    Error::Bounds { index, limit }
}
