use thiserror::Error;

/// Errors raised by the numerical routines and the scenario pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("seminorm degenerate at truncation: level {level} has no positive weight on the support of x")]
    DegenerateSeminorm { level: usize },
    #[error("negative time {0} rejected")]
    NegativeTime(f64),
    #[error("subset vacuous at truncation: {0}")]
    VacuousSubset(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("quadrature did not converge on [{a}, {b}] (estimated error {err:e})")]
    QuadratureNonConvergence { a: f64, b: f64, err: f64 },
    #[error("radius too small: boundary contribution {boundary:e} exceeds tail tolerance at R = {radius}")]
    RadiusTooSmall { radius: f64, boundary: f64 },
    #[error("no witness: {0}")]
    NoWitness(String),
    #[error("no closed-form oracle for this space/exponent combination: {0}")]
    NoOracle(String),
    #[error("incompatible pairing: {0}")]
    Incompatible(String),
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error("cannot check hierarchy: {0}")]
    CannotCheck(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
