use thiserror::Error;

/// Failure to read one of the canonical text forms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error: {msg}")]
pub struct ParseError {
    pub msg: String,
}

impl ParseError {
    pub fn new(msg: impl Into<String>) -> Self {
        ParseError { msg: msg.into() }
    }
}

/// Errors of the exact order kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("finite sets differ in size: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("gap {gap} of the fixed set holds {left} points of d0 but {right} of d1")]
    GapMismatch { gap: String, left: usize, right: usize },
    #[error("sets meet the fixed set")]
    MeetsFixedSet,
    #[error("invalid block: {0}")]
    InvalidBlock(String),
}
