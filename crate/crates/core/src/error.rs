use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex cover exceeds depth cap {cap}")]
    DepthExceeded { cap: usize },

    #[error("no clique of size >= {k} found")]
    NotFound { k: usize },

    #[error("theta solver stopped after {iterations} iterations without converging (best value {value})")]
    NotConverged { iterations: usize, value: f64 },

    #[error("oracle timed out after {nodes} search nodes")]
    OracleTimeout { nodes: u64 },

    #[error("oracle unavailable: {0}")]
    OracleUnavailable(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("certificate construction failed: {0}")]
    Certificate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
