use thiserror::Error;

use crate::field::Rat;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivByZero,

    #[error("series has no nonzero coefficient below its precision")]
    ZeroLeadingTerm,

    #[error("leading coefficient matrix is singular")]
    SingularLeadingMatrix,

    #[error("inverse of an exact series with more than one term needs a precision bound")]
    UnboundedPrecision,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("scalar {0} is not invertible")]
    NonInvertibleScalar(String),

    #[error("unknown root {0:?} for this root datum")]
    UnknownRoot(Vec<i64>),

    #[error("unsupported group type {0:?}")]
    UnsupportedGroup(String),

    #[error("need {needed} known t-orders, have {have}")]
    InsufficientPrecision { needed: i64, have: i64 },

    #[error("coefficient has a pole outside the point set (at {location})")]
    PoleOutsidePointSet { location: String },

    #[error("input matrix {index} is not congruent to the identity mod t")]
    NotIdentityModT { index: usize },

    #[error("input precision {have} is below the target {target}")]
    PrecisionExhausted { have: i64, target: i64 },

    #[error("expected {needed} points (4m with m = {m} positive roots), got {got}")]
    WrongPointCount { needed: usize, m: usize, got: usize },

    #[error("invalid point set: {0}")]
    InvalidPoints(String),

    #[error("invalid precision: {0}")]
    InvalidPrecision(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported format version {0}")]
    FormatVersion(u32),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn pole_at(q: &Rat) -> Error {
        Error::PoleOutsidePointSet {
            location: format!("x = {q}"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
