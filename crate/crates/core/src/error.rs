use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the phylogeny pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParamDomain(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("argument outside the polynomial domain [-1, 1]: {0}")]
    Domain(f64),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("invalid tree shape: {0}")]
    InvalidShape(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("training failed: {failed} of {total} pairs could not be fitted")]
    Training { failed: usize, total: usize },

    #[error("entropy is undefined for a graph without nodes")]
    UndefinedEntropy,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json { context: context.into(), source }
    }

    /// True for errors caused by bad data or numerics rather than bad usage.
    pub fn is_data_error(&self) -> bool {
        !matches!(self, Error::ParamDomain(_) | Error::InvalidShape(_))
    }
}
