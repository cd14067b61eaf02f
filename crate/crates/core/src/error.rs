use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("infeasible scenario: {0}")]
    InfeasibleScenario(String),

    #[error("node index {index} out of range 1..={count}")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("spacing has {actual} hops, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("minimizer did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        best: Vec<f64>,
    },

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
