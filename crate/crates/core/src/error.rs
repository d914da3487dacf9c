use thiserror::Error;

use crate::numeric::Field;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("field mismatch: {0:?} vs {1:?}")]
    FieldMismatch(Field, Field),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("real-field value has nonzero imaginary part {0}")]
    NotReal(f64),

    #[error("non-finite entry")]
    NonFinite,

    #[error("empty vector or matrix")]
    Empty,

    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },

    #[error("zero vector has no peak set")]
    ZeroVector,

    #[error("invalid tolerance {name} = {value}: must lie in (0, 1e-3)")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("invalid norm: {0}")]
    InvalidNorm(String),

    #[error("invalid sample configuration: {0}")]
    InvalidConfig(String),

    #[error("dominance hypothesis violated at index {0}")]
    HypothesisViolated(usize),

    #[error("witness search exhausted after {0} samples")]
    WitnessNotFound(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
