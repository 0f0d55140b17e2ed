use thiserror::Error;

/// Errors produced by the numerical routines, samplers and law evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} requires {requirement}, got {value}")]
    Domain {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("integrand is not finite at x = {0}")]
    NonFiniteIntegrand(f64),
    #[error("{0} did not converge")]
    NonConvergence(String),
    #[error("unsupported law combination: {0}")]
    Unsupported(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, requirement: &'static str, value: f64) -> Error {
    Error::Domain {
        name,
        requirement,
        value,
    }
}
