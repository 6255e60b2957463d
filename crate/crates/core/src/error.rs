use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in {what}")]
    NumericDomain { what: String },

    #[error("inner iteration limit of {iters} exceeded (last residual {residual:e})")]
    IterationLimitExceeded { iters: usize, residual: f64 },

    #[error("at time index {step}, x = {x}: {source}")]
    AtPoint {
        step: usize,
        x: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("N = {n}: {source}")]
    AtResolution {
        n: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn non_finite(what: impl Into<String>) -> Self {
        Error::NumericDomain { what: what.into() }
    }

    pub(crate) fn at_point(self, step: usize, x: f64) -> Self {
        Error::AtPoint {
            step,
            x,
            source: Box::new(self),
        }
    }

    /// Innermost error, with location wrappers stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPoint { source, .. } | Error::AtResolution { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn finite(value: f64, what: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::non_finite(what))
    }
}
