use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or configuration value violates a documented constraint.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A path sample is too short for the requested averaging window.
    #[error("sample too short: need {needed} grid steps, have {available}")]
    Length { needed: usize, available: usize },

    /// A state became non-finite during integration.
    #[error("numeric blow-up at step {index} (t = {time})")]
    BlowUp { index: usize, time: f64 },

    /// The request is well formed but has no answer for these inputs.
    #[error("domain error: {0}")]
    Domain(String),

    /// An internal consistency check failed.
    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Length { .. } | Error::Domain(_) | Error::Json(_) => 2,
            Error::BlowUp { .. } | Error::Internal(_) => 3,
            Error::Io(_) => 1,
        }
    }
}
