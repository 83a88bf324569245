use num_bigint::BigInt;
use thiserror::Error;

/// Failures raised by the matrix, series and generating-function layers.
///
/// Indices carried in messages are 1-based, matching the constraint DSL.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("expected length {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("entry ({row}, {col}) must be zero: {reason}")]
    NotTriangular {
        row: usize,
        col: usize,
        reason: &'static str,
    },

    #[error("B = (I - A)^-1 has negative entry {value} at ({row}, {col}); the family contains non-compositions")]
    CompositionConditionViolated { row: usize, col: usize, value: BigInt },

    #[error("factor {index} has non-positive exponent {value}")]
    DegenerateFactor { index: usize, value: BigInt },

    #[error("exponent {value} does not fit the series exponent range")]
    ExponentOverflow { value: BigInt },

    #[error("slack at position {index} is {slack}; sequence is not in the family")]
    NotInFamily { index: usize, slack: BigInt },

    #[error("part {index} = {part} is not a nonnegative multiple of {modulus}")]
    NotMultiple {
        index: usize,
        part: BigInt,
        modulus: BigInt,
    },

    #[error("a_{index} = {value} must be a positive integer")]
    NonPositiveRatio { index: usize, value: i64 },

    #[error("numerator term has negative exponent {value}")]
    NegativeExponent { value: i128 },

    #[error("first constraint allows a negative first part (tail {tail:?} gives right-hand side {rhs})")]
    FirstPartMayBeNegative { tail: Vec<i64>, rhs: i128 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("parameter violation: {0}")]
    ParameterViolation(String),

    #[error("sequence is infeasible: c_{index} = {value} is below {bound}")]
    InfeasibleSequence { index: usize, value: u64, bound: u64 },

    #[error("enumeration would visit {count} cases (limit {limit})")]
    TooMany { count: BigInt, limit: u64 },

    #[error("substitution maps factor (1 - x^{o} y^{e}) to exponent ({new_o}, {new_e})")]
    InvalidSubstitution { o: u64, e: u64, new_o: i128, new_e: i128 },

    #[error("series must have constant term 1, found {0}")]
    NotUnitSeries(BigInt),

    #[error("series is not univariate")]
    NotUnivariate,
}

pub type Result<T, E = GfError> = std::result::Result<T, E>;
