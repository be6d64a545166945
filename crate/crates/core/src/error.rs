use thiserror::Error;

pub type Result<T, E = CopxError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CopxError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("cannot parse rational {text:?}: {reason}")]
    ParseRational { text: String, reason: String },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("{what} size {n} exceeds the configured cap of {cap}")]
    SizeCap { what: &'static str, n: usize, cap: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("weight vector does not fit the {regime} regime: {reason}")]
    RegimeMismatch { regime: &'static str, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("polyhedron is unbounded along ray {ray:?}")]
    Unbounded { ray: Vec<String> },

    #[error("certificate failed re-verification: {0}")]
    CertificateInvalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
