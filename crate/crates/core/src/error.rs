use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid probability vector: {0}")]
    InvalidPmf(String),

    #[error("entropy diverges: {0}")]
    DivergentEntropy(String),

    #[error("divergence is infinite: {0}")]
    DivergentValue(String),

    #[error("alphabet mismatch: expected {expected}, got {got}")]
    AlphabetMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid quantum object: {0}")]
    InvalidQuantumObject(String),

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("invalid risk parameter: {0}")]
    InvalidRisk(String),

    #[error("invalid odds: {0}")]
    InvalidOdds(String),

    #[error("utility undefined at zero wealth for R = {0}")]
    UndefinedAtZero(f64),

    #[error("zero payoff on the support meets a negative power (1 - R = {0})")]
    ZeroPayoffAtNegativePower(f64),

    #[error("degenerate distribution: {0}")]
    DegenerateDistribution(String),

    #[error("optimizer did not converge after {iterations} iterations (best value {best_value})")]
    OptimizerDidNotConverge {
        iterations: usize,
        best_value: f64,
        best_point: Vec<f64>,
    },

    #[error("free set is empty")]
    EmptyFreeSet,

    #[error("free set kind does not apply here: {0}")]
    WrongFreeSetKind(String),

    #[error("minimax gap exceeded: min-max {min_max}, max-min {max_min}")]
    MinimaxGapExceeded { min_max: f64, max_min: f64 },

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by malformed or out-of-domain inputs.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::OptimizerDidNotConverge { .. } | Error::MinimaxGapExceeded { .. }
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
