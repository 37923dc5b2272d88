//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The input stream itself could not be read or decoded.
    #[error("ingest failed: {0}")]
    Ingest(String),

    /// An argument violates an operation precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Malformed configuration or lexicon/definition file.
    #[error("configuration error: {0}")]
    Config(String),

    /// A referenced vertex, record, or cache entry does not exist.
    #[error("not found: {0}")]
    NotFound(String),

    /// A model fit could not be produced; names the offending family.
    #[error("fit error ({family}): {message}")]
    Fit { family: &'static str, message: String },

    /// A model comparison could not be carried out.
    #[error("comparison error: {0}")]
    Comparison(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
