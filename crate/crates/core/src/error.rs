use thiserror::Error;

use crate::ode::OdeError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("state r = {r} lies on the singular set {{0, 1}}")]
    SingularState { r: f64 },
    #[error("sample grid is not strictly increasing at index {index}")]
    NonMonotoneGrid { index: usize },
    #[error("integration failed: {0}")]
    Integration(#[from] OdeError),
    #[error("sample budget of {limit} exceeded")]
    SampleBudget { limit: usize },
    #[error("need at least {needed} interior crossings, found {found}")]
    InsufficientCrossings { found: usize, needed: usize },
    #[error("trajectory stopped with {found}, expected {expected}")]
    WrongStopReason { expected: &'static str, found: String },
    #[error("trajectory is not periodic: closure defect {defect:e}")]
    NotPeriodic { defect: f64 },
    #[error("perturbation crosses a singular barrier at s = {s}")]
    BarrierCrossing { s: f64 },
    #[error("quadrature did not converge, error estimate {error:e}")]
    Quadrature { error: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("malformed input: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
