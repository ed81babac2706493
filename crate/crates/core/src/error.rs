use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative scheme hit its iteration cap.
    #[error("{routine} did not converge after {iterations} iterations")]
    NonConvergence { routine: &'static str, iterations: usize },

    /// Adaptive quadrature stopped before reaching the requested tolerance.
    #[error("quadrature reached error estimate {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    /// A transition matrix or chain violates a structural requirement.
    #[error("structural error: {0}")]
    Structural(String),

    /// Network construction failed.
    #[error("invalid network: {0}")]
    Network(String),

    /// Edge-list file could not be parsed.
    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
