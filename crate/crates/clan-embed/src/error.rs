use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input not found: {0}")]
    NotFound(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A guaranteed inequality failed to hold. Never a tolerance issue.
    #[error("violated inequality: {0}")]
    Defect(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn defect(msg: impl Into<String>) -> Self {
        Error::Defect(msg.into())
    }

    pub fn is_defect(&self) -> bool {
        matches!(self, Error::Defect(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
