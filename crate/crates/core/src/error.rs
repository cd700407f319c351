use thiserror::Error;

/// Errors produced by the library. Every variant corresponds to a violated
/// precondition on the inputs; numerical routines themselves do not fail.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("index error: {0}")]
    Index(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("unitarity residual {residual:.3e} exceeds tolerance {tol:.1e}")]
    NotUnitary { residual: f64, tol: f64 },

    #[error("contract error: {0}")]
    Contract(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
