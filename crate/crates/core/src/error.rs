use thiserror::Error;

/// Errors raised by measure constructors, solvers and file readers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("size mismatch: {left} vs {right}")]
    Size { left: usize, right: usize },

    #[error("monotonicity violated: {0}")]
    Monotonicity(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no steepest descent direction exists at a Dirac measure for r = {r}")]
    NoSteepestDescent { r: f64 },

    #[error("root solver failed after {iterations} iterations: {reason}")]
    SolverFailure { iterations: usize, reason: String },

    #[error("discrepancy rose by {increase:e} at step {step}, beyond the allowance {allowance:e}")]
    SlackViolation { step: usize, increase: f64, allowance: f64 },

    #[error("out of range: {0}")]
    Range(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("degenerate image: total mass is zero")]
    DegenerateImage,

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
