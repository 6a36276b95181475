use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {function}: coordinate {coordinate} = {value} is outside {domain}")]
    Domain {
        function: String,
        coordinate: usize,
        value: f64,
        domain: String,
    },

    #[error("dimension mismatch: expected {expected}, found {found} ({context})")]
    DimensionMismatch {
        expected: usize,
        found: usize,
        context: &'static str,
    },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("invalid endpoints: {0}")]
    InvalidEndpoints(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("invalid Rényi order {0}: must be positive and different from 1")]
    InvalidOrder(f64),

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("invalid parameter `{name}` for {function}: {reason}")]
    InvalidParameter {
        function: String,
        name: String,
        reason: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
