use thiserror::Error;

/// Errors raised by the solver, the problem catalog and the run driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("solver blow-up at t = {t:.6e}, stage {stage}, cell {cell}: {reason}")]
    BlowUp {
        t: f64,
        stage: usize,
        cell: String,
        reason: String,
    },

    #[error("unknown problem `{name}`; available: {available}")]
    UnknownProblem { name: String, available: String },

    #[error("malformed snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for errors that belong to the configuration class (CLI exit code 2).
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::UnknownProblem { .. })
    }

    /// True for numerical failures (CLI exit code 3).
    pub fn is_blow_up(&self) -> bool {
        matches!(self, Error::BlowUp { .. } | Error::InvalidState(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
