//! Mechanisms, audits, and a Monte Carlo harness for truthful fair division
//! of indivisible goods under stochastic valuations.
//!
//! - [`dist`]: valid value distributions with exact CDF/quantile arithmetic.
//! - [`mech`]: allocation mechanisms (quota picks, quantile thresholds,
//!   exchanges, rankings, welfare max) as pure functions of the bids.
//! - [`prophet`]: the optimal-stopping side of the quantile correspondence.
//! - [`audit`]: welfare, envy, Pareto, and incentive measurement.
//! - [`harness`]: seeded scenario runner, reports, experiment registry.

pub mod audit;
pub mod dist;
pub mod error;
pub mod harness;
pub mod mech;
pub mod numeric;
pub mod prophet;
pub mod rng;

pub use error::{Error, Result};
