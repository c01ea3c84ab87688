use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input text could not be tokenized into a recognised layout.
    #[error("format error: {0}")]
    Format(String),
    /// Input was well formed but violates an instance invariant.
    #[error("validation error: {0}")]
    Validation(String),
    /// Arguments outside the range an operation supports.
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
