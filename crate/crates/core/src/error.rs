use thiserror::Error;

/// Errors raised by the algebra substrate and both reduction pipelines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("group closure exceeded the order bound {bound}")]
    OrderBoundExceeded { bound: usize },

    #[error("two group elements agree to double precision but differ at working precision; precision too low")]
    DuplicateCollision,

    #[error("elements equal up to a scalar whose ratio is not a root of unity")]
    NonRootOfUnityRatio,

    #[error("leading coefficient vanishes at tolerance")]
    LeadingCoefficientZero,

    #[error("root finder did not converge for degree {degree} after {iterations} iterations")]
    NonConvergence { degree: usize, iterations: u32 },

    #[error("input has repeated roots")]
    RepeatedRoots,

    #[error("degenerate input at stage `{stage}`: {detail}")]
    Degenerate { stage: &'static str, detail: String },

    #[error("point is a zero of f; the icosahedral parameter is infinite")]
    InfiniteParameter,

    #[error("point lies on the invariant curve F = 0; absolute invariants are infinite")]
    OnInvariantCurve,

    #[error("verification `{check}` failed with residual {residual:e}")]
    VerificationFailed { check: String, residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn degenerate(stage: &'static str, detail: impl Into<String>) -> Self {
        Error::Degenerate {
            stage,
            detail: detail.into(),
        }
    }

    pub(crate) fn verification(check: impl Into<String>, residual: f64) -> Self {
        Error::VerificationFailed {
            check: check.into(),
            residual,
        }
    }
}
