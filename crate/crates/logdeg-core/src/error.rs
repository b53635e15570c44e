use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unknown identifier: {0}")]
    UnknownId(String),
    #[error("map is not combinatorially flat: {0}")]
    NotFlat(String),
    #[error("non-generic point configuration: {0}")]
    NonGeneric(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("missing vertex-table entry: {0}")]
    MissingEntry(String),
    #[error("truncation underflow: {0}")]
    Truncation(String),
    #[error("diagonal mismatch at edge {edge}: {left} vs {right}")]
    DiagonalMismatch {
        edge: String,
        left: String,
        right: String,
    },
    #[error("not enough series terms: {0}")]
    InsufficientTerms(String),
    #[error("underdetermined: {0}")]
    Underdetermined(String),
    #[error("computation failed: {0}")]
    Computation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
