use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("validation failed: {0}")]
    Validation(String),

    /// A parameter lies outside the physically admissible domain, e.g. a
    /// projectile coherence beyond the positivity bound.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no thermal steady state: lambda = {lambda} <= -1/(2 alpha) = {limit}")]
    NonThermalSteadyState { lambda: f64, limit: f64 },

    #[error("temperature undefined: {0}")]
    UndefinedTemperature(String),

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    /// Numerical failure. `best` carries the best value found when the
    /// failing routine is an optimizer.
    #[error("numerical failure: {message}")]
    Numerical { message: String, best: Option<f64> },
}

pub type Result<T> = std::result::Result<T, Error>;
