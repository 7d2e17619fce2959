use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: domain error: {msg}")]
    Domain { op: &'static str, msg: String },
    #[error("{op}: range error: {msg}")]
    Range { op: &'static str, msg: String },
    /// The requested tolerance was not met. `estimate` is the best value found.
    #[error("{op}: accuracy target not met: {msg} (best estimate {estimate:e})")]
    Accuracy {
        op: &'static str,
        msg: String,
        estimate: f64,
    },
    #[error("{op}: indeterminate form: {msg}")]
    Indeterminate { op: &'static str, msg: String },
    #[error("{op}: internal consistency check failed: {msg}")]
    Consistency { op: &'static str, msg: String },
    #[error("{op}: sampler diagnostics failed: {msg}")]
    Diagnostics { op: &'static str, msg: String },
}

impl Error {
    pub fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    pub fn range(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Range { op, msg: msg.into() }
    }

    pub fn accuracy(op: &'static str, msg: impl Into<String>, estimate: f64) -> Self {
        Error::Accuracy {
            op,
            msg: msg.into(),
            estimate,
        }
    }

    pub fn consistency(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Consistency { op, msg: msg.into() }
    }

    /// Short machine-readable tag, used in JSON error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Range { .. } => "range",
            Error::Accuracy { .. } => "accuracy",
            Error::Indeterminate { .. } => "indeterminate",
            Error::Consistency { .. } => "consistency",
            Error::Diagnostics { .. } => "diagnostics",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
