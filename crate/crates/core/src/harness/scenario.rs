//! Seeded Monte Carlo scenario execution.
//!
//! Trial k draws its values from `RandomStream(seed, k)`; audits that need
//! extra randomness use sub-indexed streams in separate index planes. Trials
//! fan out across a rayon pool, results are collected in trial order, and
//! every aggregate is reduced sequentially, so the worker count never
//! changes a report.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::audit::{
    bic_audit, default_bic_deviations, dsic_audit, envy_check, optimal_welfare, pareto_check,
    social_welfare, DeviationSearch,
};
use crate::error::Result;
use crate::harness::config::{AuditKind, ScenarioConfig};
use crate::harness::report::{AuditOutcome, SummaryReport, TrialRow};
use crate::mech::{run_mechanism, MechanismSpec, ValuationMatrix};
use crate::numeric::{frequency_ci95, ratio_of_means_ci95};
use crate::rng::RandomStream;

/// Stream-index planes: value draws live at the trial index, audit
/// randomness in high planes so adding audits never disturbs the draws.
const BIC_STREAM_PLANE: u64 = 1 << 40;
const DSIC_STREAM_PLANE: u64 = 2 << 40;

/// Resolve the worker count: explicit argument, else FAIRDIV_WORKERS, else
/// one worker per core.
pub fn resolve_workers(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| {
            std::env::var("FAIRDIV_WORKERS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .filter(|&w| w > 0)
        .unwrap_or_else(num_cpus_default)
}

fn num_cpus_default() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn sample_values(config: &ScenarioConfig, rng: &mut RandomStream) -> ValuationMatrix {
    if let Some(d) = &config.distribution {
        ValuationMatrix::sample_iid(d, config.n, config.m, rng)
    } else {
        let dists = config.distributions.as_ref().expect("validated");
        ValuationMatrix::sample_per_agent(dists, config.m, rng)
    }
}

fn run_trial(config: &ScenarioConfig, mech_dists: &[crate::dist::DistributionSpec], k: usize) -> Result<TrialRow> {
    let mut rng = RandomStream::new(config.seed, k as u64);
    let values = sample_values(config, &mut rng);
    let alloc = run_mechanism(&config.mechanism, &values, Some(mech_dists))?;
    let envy = envy_check(&values, &alloc);
    Ok(TrialRow {
        trial: k,
        stream_index: k as u64,
        mechanism_welfare: social_welfare(&values, &alloc),
        optimal_welfare: optimal_welfare(&values),
        envy_free: envy.envy_free(),
    })
}

/// Run a scenario on the default worker count.
pub fn run_scenario(config: &ScenarioConfig) -> Result<SummaryReport> {
    run_scenario_with_workers(config, None)
}

/// Run a scenario on an explicit worker count.
pub fn run_scenario_with_workers(
    config: &ScenarioConfig,
    workers: Option<usize>,
) -> Result<SummaryReport> {
    config.validate()?;
    let started = Instant::now();
    let mech_dists = config.mechanism_distributions();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(resolve_workers(workers))
        .build()
        .expect("thread pool");
    let table: Result<Vec<TrialRow>> = pool.install(|| {
        (0..config.trials)
            .into_par_iter()
            .map(|k| run_trial(config, &mech_dists, k))
            .collect()
    });
    let table = table?;

    let mut audits = BTreeMap::new();
    for audit in &config.audits {
        let outcome = match audit {
            AuditKind::WelfareRatio => {
                let mech: Vec<f64> = table.iter().map(|r| r.mechanism_welfare).collect();
                let opt: Vec<f64> = table.iter().map(|r| r.optimal_welfare).collect();
                let (estimate, ci_lo, ci_hi) = ratio_of_means_ci95(&mech, &opt);
                AuditOutcome::WelfareRatio {
                    estimate,
                    ci_lo,
                    ci_hi,
                    mean_mechanism_welfare: crate::numeric::mean(&mech),
                    mean_optimal_welfare: crate::numeric::mean(&opt),
                }
            }
            AuditKind::Envy => {
                let ef = table.iter().filter(|r| r.envy_free).count();
                let (freq, ci_lo, ci_hi) = frequency_ci95(ef, table.len());
                AuditOutcome::Envy {
                    ef_frequency: freq,
                    ci_lo,
                    ci_hi,
                    envy_free_trials: ef,
                }
            }
            AuditKind::Dsic => run_dsic_audit(config, &mech_dists)?,
            AuditKind::Bic => {
                let dist = config.distribution.as_ref().expect("validated");
                let summary = bic_audit(
                    &config.mechanism,
                    dist,
                    config.n,
                    config.m,
                    config.trials,
                    &default_bic_deviations(),
                    config.seed ^ BIC_STREAM_PLANE,
                )?;
                AuditOutcome::Bic { pass: summary.pass, rows: summary.rows }
            }
            AuditKind::Pareto => run_pareto_audit(config, &mech_dists)?,
        };
        audits.insert(audit.key().to_string(), outcome);
    }

    Ok(SummaryReport {
        library_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        trials: config.trials,
        elapsed_ms: started.elapsed().as_millis(),
        config: config.clone(),
        audits,
        table,
    })
}

/// Scenario-level deviation audit: replay the first few trial instances and
/// search each for profitable misreports. The grid spans the value support
/// when small enough to exhaust; otherwise a seeded hill climb runs.
fn run_dsic_audit(
    config: &ScenarioConfig,
    mech_dists: &[crate::dist::DistributionSpec],
) -> Result<AuditOutcome> {
    let instances = config.trials.min(25);
    let budget = config.deviation_budget.unwrap_or(200_000);
    let dists = config.agent_distributions();
    let (lo, hi) = dists
        .iter()
        .map(|d| d.support())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (l, h)| (a.min(l), b.max(h)));
    let grid: Vec<f64> = (0..5).map(|k| lo + (hi - lo) * k as f64 / 4.0).collect();
    let exhaustive = (grid.len() as f64).powi(config.m as i32) <= 20_000.0;
    let mut witnesses = Vec::new();
    let mut evaluations = 0usize;
    let mut exhausted = false;
    for k in 0..instances {
        let mut rng = RandomStream::new(config.seed, k as u64);
        let values = sample_values(config, &mut rng);
        let search = if exhaustive {
            DeviationSearch::ExhaustiveGrid { grid: grid.clone() }
        } else {
            DeviationSearch::HillClimb {
                restarts: 4,
                steps: 150,
                seed: config.seed ^ DSIC_STREAM_PLANE ^ k as u64,
            }
        };
        let out = dsic_audit(&config.mechanism, Some(mech_dists), &values, &search, budget)?;
        evaluations += out.evaluations;
        exhausted |= out.budget_exhausted;
        witnesses.extend(out.witnesses);
    }
    let max_gain = witnesses.iter().map(|w| w.gain).fold(0.0f64, f64::max);
    witnesses.truncate(5);
    Ok(AuditOutcome::Dsic {
        instances_checked: instances,
        witnesses: witnesses.len(),
        max_gain,
        evaluations,
        budget_exhausted: exhausted,
        examples: witnesses,
    })
}

fn run_pareto_audit(
    config: &ScenarioConfig,
    mech_dists: &[crate::dist::DistributionSpec],
) -> Result<AuditOutcome> {
    let alpha = config.pareto_alpha.unwrap_or(0.95);
    let instances = config.trials.min(200);
    let mut passes = 0usize;
    for k in 0..instances {
        let mut rng = RandomStream::new(config.seed, k as u64);
        let values = sample_values(config, &mut rng);
        let alloc = run_mechanism(&config.mechanism, &values, Some(mech_dists))?;
        if pareto_check(&values, &alloc, alpha)? {
            passes += 1;
        }
    }
    Ok(AuditOutcome::Pareto { alpha, instances_checked: instances, passes })
}

/// Convenience constructor for programmatic scenarios.
pub fn scenario(
    n: usize,
    m: usize,
    trials: usize,
    seed: u64,
    dist: crate::dist::DistributionSpec,
    mechanism: MechanismSpec,
    audits: Vec<AuditKind>,
) -> ScenarioConfig {
    ScenarioConfig {
        n,
        m,
        trials,
        seed,
        distribution: Some(dist),
        distributions: None,
        mechanism,
        audits,
        pareto_alpha: None,
        deviation_budget: None,
        out: None,
    }
}
