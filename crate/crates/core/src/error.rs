use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation (NaN, infinity,
    /// out-of-range quantizer input, non-positive parameter).
    #[error("domain error: {0}")]
    Domain(String),

    /// An RK4 step produced a non-finite coordinate.
    #[error("integration diverged: {0}")]
    IntegrationDiverged(String),

    /// Malformed or unsupported file content. `field` names the offending
    /// header field or structural element.
    #[error("format error ({field}): {detail}")]
    Format { field: &'static str, detail: String },

    #[error("length error: {0}")]
    Length(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("key error: {0}")]
    Key(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn format(field: &'static str, detail: impl Into<String>) -> Self {
        Error::Format {
            field,
            detail: detail.into(),
        }
    }
}
