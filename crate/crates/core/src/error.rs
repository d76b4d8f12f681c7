use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("spin label {0} is not a positive half-integer")]
    InvalidSpin(f64),

    #[error("magnetic quantum number {m} is not in {{-j, ..., j}} for j = {j}")]
    InvalidMagnetic { j: f64, m: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("the zero vector is not a ray")]
    ZeroVector,

    #[error("rotation axis is not a unit vector (norm {0})")]
    NonUnitAxis(f64),

    #[error("axis index {0} is outside {{1, 2, 3}}")]
    BadAxis(usize),

    #[error("invalid chain specification: {0}")]
    InvalidChain(String),

    #[error("imaginary residue {residue:e} of {what} exceeds tolerance")]
    ImaginaryResidue { what: String, residue: f64 },

    #[error("mean spin vanishes (f1 = {0:e}); the rotation axis is undefined")]
    UndefinedAxis(f64),

    #[error("operation requires j = 1, got j = {0}")]
    RequiresSpinOne(f64),

    #[error("gradient-built matrix deviates from the closed form by {0:e} (relative)")]
    ClosedFormMismatch(f64),

    #[error("truncation guard violated: {0}")]
    Truncation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state file: {0}")]
    StateFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
