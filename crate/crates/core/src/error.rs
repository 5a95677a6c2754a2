use thiserror::Error;

pub type Result<T> = std::result::Result<T, NfError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NfError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for dimension {n}")]
    VariableOutOfRange { index: usize, n: usize },

    #[error("polynomial has a non-real coefficient")]
    NotReal,

    #[error("invalid frequency data: {0}")]
    InvalidFrequency(String),

    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { got: usize, expected: usize },

    #[error("input is not S1-invariant; its derivative along the action is {witness}")]
    NotInvariant { witness: String },

    #[error("homogeneous component of odd degree {0} has no representation in the Hopf variables")]
    OddDegree(u32),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("missing value for parameter {0}")]
    MissingParameter(String),

    #[error("linear system has no solution")]
    Inconsistent,

    #[error("fixed-point iteration did not converge at step {step} (residual {residual:e})")]
    NonConvergence { step: usize, residual: f64 },

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
