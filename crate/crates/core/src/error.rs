use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty box collection")]
    EmptyCollection,

    #[error("box {id} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        id: usize,
        expected: usize,
        found: usize,
    },

    #[error("intervals share an endpoint at {0}; normalize the boxes first")]
    SharedEndpoint(String),

    #[error("{what} refused: {size} exceeds the configured limit {limit}")]
    OracleLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("digraph contains a directed cycle")]
    NotAcyclic,

    #[error("host graph inconsistency: {0}")]
    HostInconsistency(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid input: {0}")]
    InvalidSpec(String),

    #[error("certificate does not match the instance: {0}")]
    Mismatch(String),

    #[error("bound too large to materialise: {0}")]
    BoundTooLarge(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
