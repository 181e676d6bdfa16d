use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChiError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at χ = {point}: factor {factor} vanishes")]
    Pole { factor: String, point: String },
    #[error("domain error: {0}")]
    Domain(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Chi(#[from] ChiError),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("leg mismatch: {0}")]
    LegMismatch(String),
    #[error("flavor mismatch: {0}")]
    FlavorMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
