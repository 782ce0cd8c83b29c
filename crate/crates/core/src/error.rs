use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unsupported coefficient: {0}")]
    UnsupportedCoefficient(String),
    #[error("tier unsupported: {0}")]
    TierUnsupported(String),
    #[error("no solution: right-hand side not in the column image")]
    NoSolution,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("inconsistent certificate: {0}")]
    InconsistentCertificate(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
