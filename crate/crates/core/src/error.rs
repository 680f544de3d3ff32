use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// The variants are grouped by the exit-code classes used by the command
/// line tool: domain problems, budget overruns and convergence failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("degenerate parameters: {0}")]
    DegenerateParameter(String),

    #[error("value out of floating-point range: {0}")]
    Range(String),

    #[error("non-finite integrand value {value} at node {node}")]
    Evaluation { node: f64, value: Complex64 },

    #[error("series did not converge after {iterations} terms (partial sum {partial})")]
    Convergence { iterations: usize, partial: Complex64 },

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("bound violated: {0}")]
    BoundViolation(String),

    #[error("evaluation budget exceeded: requested {requested} nodes, cap is {cap}")]
    Budget { requested: usize, cap: usize },

    #[error("input/output error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code: 2 for domain errors, 3 for budget overruns,
    /// 4 for convergence failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Pole(_) | Error::DegenerateParameter(_) => 2,
            Error::Budget { .. } => 3,
            Error::Convergence { .. } => 4,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
