use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cluster {cluster} is empty")]
    EmptyCluster { cluster: usize },

    #[error("point {point} is the only member of cluster {cluster}; moving it cannot improve")]
    SingletonSource { point: usize, cluster: usize },

    #[error("point {point} is not assigned to cluster {cluster}")]
    NotInCluster { point: usize, cluster: usize },

    #[error("source and target cluster are both {cluster}")]
    SameCluster { cluster: usize },

    #[error("index {index} out of range (limit {limit})")]
    OutOfRange { index: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("k = {k} is invalid for n = {n} points")]
    InvalidK { k: usize, n: usize },

    #[error("scripted move {index} (point {point}: {src} -> {dst}) has non-improving gain {gain}")]
    ScriptInvalid {
        index: usize,
        point: usize,
        src: usize,
        dst: usize,
        gain: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn precondition(message: impl Into<String>) -> Self {
        Error::Precondition(message.into())
    }
}
