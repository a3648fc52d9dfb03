use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot access `{}`", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed network spec: {0}")]
    Parse(String),

    #[error("invalid field `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("{what} index {index} out of range (len {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(&'static str),

    #[error("reference point {reference:?} is not dominated by front point {point:?}")]
    InvalidReference { point: Vec<f64>, reference: Vec<f64> },

    #[error("finite-difference step {delta} is below the resolvable minimum {min}")]
    StepUnderflow { delta: f64, min: f64 },

    #[error("pool too small: need at least {needed}, have {found}")]
    PoolTooSmall { needed: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("infeasible configuration: {0}")]
    InfeasibleConfig(String),
}

impl Error {
    /// Whether the error stems from the caller's input rather than from a
    /// computation on valid input.
    pub fn is_input(&self) -> bool {
        matches!(
            self,
            Error::Io { .. }
                | Error::Parse(_)
                | Error::Validation { .. }
                | Error::InvalidArgument(_)
                | Error::IndexOutOfRange { .. }
                | Error::DimensionMismatch { .. }
                | Error::InfeasibleConfig(_)
        )
    }

    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}
