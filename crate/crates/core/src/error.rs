//! Crate-wide error type.

use std::fmt;

/// Errors surfaced by distribution construction, mechanism evaluation,
/// audits, and the scenario harness.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Distribution parameters violate a family invariant.
    InvalidDistribution(String),
    /// An argument is outside its documented domain.
    InvalidArgument(String),
    /// A mechanism description is malformed (bad shares, non-partition, ...).
    InvalidMechanism(String),
    /// A brute-force routine refused an instance beyond its size guard.
    InstanceTooLarge { what: String, size: f64, limit: f64 },
    /// An iterative solver exhausted its budget; residuals are reported.
    NoConvergence { what: String, residuals: Vec<f64> },
    /// A root finder could not bracket a sign change.
    BracketFailure(String),
    /// Config validation failed; every violation is listed.
    InvalidConfig(Vec<String>),
    /// Experiment name not in the registry; known names are listed.
    UnknownExperiment { name: String, known: Vec<String> },
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDistribution(msg) => write!(f, "invalid distribution: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::InvalidMechanism(msg) => write!(f, "invalid mechanism: {msg}"),
            Error::InstanceTooLarge { what, size, limit } => {
                write!(f, "{what}: instance size {size:.0} exceeds limit {limit:.0}")
            }
            Error::NoConvergence { what, residuals } => {
                write!(f, "{what}: no convergence, residuals {residuals:?}")
            }
            Error::BracketFailure(msg) => write!(f, "bracket failure: {msg}"),
            Error::InvalidConfig(violations) => {
                write!(f, "invalid config:")?;
                for v in violations {
                    write!(f, "\n  - {v}")?;
                }
                Ok(())
            }
            Error::UnknownExperiment { name, known } => {
                write!(f, "unknown experiment {name:?}; known: {}", known.join(", "))
            }
        }
    }
}

impl std::error::Error for Error {}
