use std::fmt;

/// Errors reported by the solver kernels and the analysis layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The factorization hit a pivot that is tiny relative to the matrix scale.
    /// For the inviscid-type models this happens close to an eigenfrequency.
    #[error("near-singular system: pivot magnitude {pivot:.3e} at row {row} (relative {relative:.3e}); the frequency is likely close to an eigenfrequency")]
    NearSingular { row: usize, pivot: f64, relative: f64 },

    #[error("unknown boundary component `{0}`")]
    UnknownBoundary(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("analysis region is empty")]
    EmptyRegion,

    #[error("non-positive error value {value:e} at sample {index}")]
    NonPositiveError { index: usize, value: f64 },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl fmt::Display) -> Self {
        Error::InvalidParameter { name, reason: reason.to_string() }
    }

    /// True for failures caused by an (almost) singular linear system.
    pub fn is_near_singular(&self) -> bool {
        matches!(self, Error::NearSingular { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
