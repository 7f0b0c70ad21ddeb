use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("pole at {0}")]
    Pole(String),
    #[error("series did not converge after {terms} terms ({what})")]
    NonConvergence { what: &'static str, terms: usize },
    #[error("frequency on a cavity resonance (|sin(pi nu)| = {0:e})")]
    Resonance(f64),
    #[error("source and field points coincide")]
    CoincidentPoints,
    #[error("degree {0} too close to an integer")]
    IntegerDegree(f64),
    #[error("target {target} outside achievable range [{lo}, {hi}]")]
    OutOfRange { target: f64, lo: f64, hi: f64 },
    #[error("empty mode range")]
    EmptyRange,
    #[error("delta omega vanishes, fidelity undefined")]
    ZeroCoupling,
    #[error("root finder failed: {0}")]
    RootNotFound(String),
    #[error("eigensolver failed: {0}")]
    Eigen(String),
}

pub type Result<T> = std::result::Result<T, Error>;
