use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point {0} lies outside the domain")]
    OutsideDomain(String),

    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("D must be compact: {0}")]
    NotCompact(String),

    #[error("undefined excess: the reference set is empty")]
    UndefinedExcess,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid does not cover {0}")]
    GridNotCovering(String),

    #[error("truncation too small: bound {bound} does not cover aggregate endowment component {needed}")]
    TruncationTooSmall { bound: String, needed: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("undetermined: {0}")]
    Undetermined(String),

    #[error("document error at {path}: {message}")]
    Document { path: String, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn doc(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Document { path: path.into(), message: message.into() }
    }
}
