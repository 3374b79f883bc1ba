//! Fairness, efficiency, and incentive measurement, plus exact validators
//! for the combinatorial lemmas behind the two-agent bounds.

mod bounds;
mod ceiling;
mod coupling;
mod deviation;
mod welfare;

pub use coupling::{coupling_divergence, matched_thresholds};
pub use deviation::{
    bic_audit, default_bic_deviations, dsic_audit, BicRow, BicSummary, BidDeviation,
    DeviationReport, DeviationSearch, DsicAuditOutcome,
};
pub use bounds::{
    binomial_abs_deviation, deviation_bound_check, envy_margin, envy_margin_s,
    envy_margin_s_check, hypergeometric_abs_deviation,
};
pub use ceiling::{ceiling_audit, CandidateScore, CeilingReport, SizeTable};
pub use welfare::{
    bundle_utility, envy_check, optimal_welfare, pareto_check, social_welfare, EnvyReport,
};
