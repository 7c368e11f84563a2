use thiserror::Error;

/// Errors raised across the certification engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("data error at trial {index}: {reason}")]
    Data { index: u64, reason: String },

    #[error("parse error on line {line}: {reason}")]
    Parse { line: u64, reason: String },

    #[error("empty support: {0}")]
    EmptySupport(String),

    #[error("strategy v{0} does not induce a distribution on non-00 outcomes")]
    DegenerateStrategy(u8),

    #[error("method {method} is incompatible: {reason}")]
    IncompatibleMethod { method: String, reason: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
