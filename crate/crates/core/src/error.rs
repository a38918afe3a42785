use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("response row is numerically zero; scores are undefined")]
    DegenerateResponse,

    #[error("augmented matrix has numerical rank zero")]
    RankZero,

    #[error("dense hat matrix of dimension {dim} exceeds the safety cap of {cap}")]
    SizeCap { dim: usize, cap: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("DNF expansion exceeds the cap of {cap} terms")]
    DnfOverflow { cap: usize },

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid_dataset(msg: impl Into<String>) -> Self {
        Error::InvalidDataset(msg.into())
    }

    pub(crate) fn invalid_argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
