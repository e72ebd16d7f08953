use thiserror::Error;

/// Errors produced by source validation, metric evaluation and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("row {row} has non-positive probability mass {mass}")]
    NonPositiveMass { row: usize, mass: f64 },

    #[error("row {row} has positive-label rate {q} outside [0, 1]")]
    OutOfRangeQ { row: usize, q: f64 },

    #[error("duplicate outcome ({x_label}, a={a})")]
    DuplicateRow { x_label: String, a: u8 },

    #[error("probability masses sum to {sum}, more than 1e-9 away from 1")]
    MassNotNormalized { sum: f64 },

    #[error("input contains no records")]
    EmptyInput,

    #[error("record {index} has invalid {field} value {value} (expected 0 or 1)")]
    BadLabel {
        index: usize,
        field: &'static str,
        value: String,
    },

    #[error("vector is not an interior point of the simplex: {reason}")]
    BadSimplexVector { reason: String },

    #[error("predictor has {got} entries but the source has {expected} rows")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("predictor entry {row} is {value}, outside [0, p] = [0, {bound}]")]
    PredictorOutOfBounds { row: usize, value: f64, bound: f64 },

    #[error("opportunity-difference undefined: P(Y=1, A={group}) = 0")]
    UndefinedEO { group: u8 },

    #[error("source has {n} rows, exhaustive routine is limited to {max}")]
    TooLarge { n: usize, max: usize },

    #[error("instance violates constraint {name}")]
    ConstraintViolation { name: &'static str },

    #[error("sufficiency condition does not hold: {reason}")]
    SufficiencyNotMet { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
