use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("invalid party index {0}")]
    InvalidParty(usize),
    #[error("states {0:?} and {1:?} are not orthogonal")]
    NotOrthogonal(String, String),
    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
