use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument {x} outside the supported range |x| <= {limit}")]
    Overflow { x: f64, limit: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("sample index {index} not covered by sample range [{k_min}, {k_max}]")]
    Coverage { index: i64, k_min: i64, k_max: i64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
