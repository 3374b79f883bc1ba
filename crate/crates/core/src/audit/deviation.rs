//! Incentive audits: exhaustive and local misreport searches for the
//! dominant-strategy property, and common-random-number Monte Carlo
//! best-response estimation for the Bayesian property.

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::mech::{run_mechanism, MechanismSpec, ValuationMatrix};
use crate::numeric::mean_ci95;
use crate::rng::RandomStream;
use serde::Serialize;

/// A deviation strictly more profitable than truth (beyond 1e-9).
#[derive(Clone, Debug, Serialize)]
pub struct DeviationReport {
    pub agent: usize,
    pub misreport: Vec<f64>,
    pub truthful_utility: f64,
    pub deviation_utility: f64,
    pub gain: f64,
    pub method: String,
}

/// How the misreport space is explored.
#[derive(Clone, Debug)]
pub enum DeviationSearch {
    /// Every bid vector on the grid, plus rank permutations of the true row
    /// and coordinate-wise grid perturbations of it.
    ExhaustiveGrid { grid: Vec<f64> },
    /// Random restarts with coordinate tweaks, keeping improvements.
    HillClimb { restarts: usize, steps: usize, seed: u64 },
}

/// Result of a deviation search over one instance.
#[derive(Clone, Debug)]
pub struct DsicAuditOutcome {
    pub witnesses: Vec<DeviationReport>,
    pub evaluations: usize,
    /// True when the evaluation budget ran out before the search space was
    /// exhausted; the witness list is then only a partial certificate.
    pub budget_exhausted: bool,
}

const GAIN_TOL: f64 = 1e-9;
const EXHAUSTIVE_LIMIT: f64 = 1e6;

fn deviator_utility(
    spec: &MechanismSpec,
    dists: Option<&[DistributionSpec]>,
    true_values: &ValuationMatrix,
    agent: usize,
    report: &[f64],
) -> Result<f64> {
    let bids = true_values.with_row(agent, report)?;
    let alloc = run_mechanism(spec, &bids, dists)?;
    Ok((0..true_values.m())
        .filter(|&j| alloc.owner(j) == agent)
        .map(|j| true_values.value(agent, j))
        .sum())
}

/// Search one instance for profitable unilateral misreports under the given
/// mechanism. An empty witness list with `budget_exhausted == false`
/// certifies that no searched deviation beats truth by more than 1e-9.
pub fn dsic_audit(
    spec: &MechanismSpec,
    dists: Option<&[DistributionSpec]>,
    true_values: &ValuationMatrix,
    search: &DeviationSearch,
    budget: usize,
) -> Result<DsicAuditOutcome> {
    let n = true_values.n();
    let m = true_values.m();
    let mut outcome = DsicAuditOutcome {
        witnesses: Vec::new(),
        evaluations: 0,
        budget_exhausted: false,
    };
    for agent in 0..n {
        let truth: Vec<f64> = true_values.row(agent).to_vec();
        let truthful_utility = deviator_utility(spec, dists, true_values, agent, &truth)?;
        let consider = |report: &[f64],
                            method: &str,
                            outcome: &mut DsicAuditOutcome|
         -> Result<bool> {
            if outcome.evaluations >= budget {
                outcome.budget_exhausted = true;
                return Ok(false);
            }
            outcome.evaluations += 1;
            let got = deviator_utility(spec, dists, true_values, agent, report)?;
            if got > truthful_utility + GAIN_TOL {
                outcome.witnesses.push(DeviationReport {
                    agent,
                    misreport: report.to_vec(),
                    truthful_utility,
                    deviation_utility: got,
                    gain: got - truthful_utility,
                    method: method.to_string(),
                });
            }
            Ok(true)
        };
        match search {
            DeviationSearch::ExhaustiveGrid { grid } => {
                if grid.is_empty() {
                    return Err(Error::InvalidArgument("empty deviation grid".into()));
                }
                let space = (grid.len() as f64).powi(m as i32);
                if space > EXHAUSTIVE_LIMIT {
                    return Err(Error::InstanceTooLarge {
                        what: "dsic_audit exhaustive grid".into(),
                        size: space,
                        limit: EXHAUSTIVE_LIMIT,
                    });
                }
                // Full grid.
                let mut idx = vec![0usize; m];
                let mut report = vec![grid[0]; m];
                'grid: loop {
                    if !consider(&report, "exhaustive-grid", &mut outcome)? {
                        break 'grid;
                    }
                    let mut j = 0;
                    loop {
                        if j == m {
                            break 'grid;
                        }
                        idx[j] += 1;
                        if idx[j] < grid.len() {
                            report[j] = grid[idx[j]];
                            break;
                        }
                        idx[j] = 0;
                        report[j] = grid[0];
                        j += 1;
                    }
                }
                // Rank permutations of the true row (m <= 6 keeps this small).
                if m <= 6 {
                    let mut perm: Vec<usize> = (0..m).collect();
                    permute_all(&mut perm, 0, &mut |p| {
                        let report: Vec<f64> = p.iter().map(|&j| truth[j]).collect();
                        consider(&report, "rank-permutation", &mut outcome).map(|_| ())
                    })?;
                }
                // Coordinate-wise grid perturbations of truth.
                for j in 0..m {
                    for &g in grid {
                        let mut report = truth.clone();
                        report[j] = g;
                        consider(&report, "coordinate-perturbation", &mut outcome)?;
                    }
                }
            }
            DeviationSearch::HillClimb { restarts, steps, seed } => {
                let hi = truth.iter().copied().fold(0.0f64, f64::max) * 2.0 + 1.0;
                let mut rng = RandomStream::new(*seed, agent as u64);
                for _ in 0..*restarts {
                    let mut current: Vec<f64> =
                        (0..m).map(|_| rng.next_f64() * hi).collect();
                    let mut best = deviator_utility(spec, dists, true_values, agent, &current)?;
                    outcome.evaluations += 1;
                    for _ in 0..*steps {
                        if outcome.evaluations >= budget {
                            outcome.budget_exhausted = true;
                            break;
                        }
                        let j = (rng.next_f64() * m as f64) as usize % m;
                        let old = current[j];
                        current[j] = rng.next_f64() * hi;
                        outcome.evaluations += 1;
                        let got = deviator_utility(spec, dists, true_values, agent, &current)?;
                        if got > best {
                            best = got;
                        } else {
                            current[j] = old;
                        }
                    }
                    if best > truthful_utility + GAIN_TOL {
                        outcome.witnesses.push(DeviationReport {
                            agent,
                            misreport: current,
                            truthful_utility,
                            deviation_utility: best,
                            gain: best - truthful_utility,
                            method: "hill-climb".to_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(outcome)
}

fn permute_all<F: FnMut(&[usize]) -> Result<()>>(
    perm: &mut Vec<usize>,
    k: usize,
    visit: &mut F,
) -> Result<()> {
    if k == perm.len() {
        return visit(perm);
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute_all(perm, k + 1, visit)?;
        perm.swap(k, i);
    }
    Ok(())
}

/// One bid transformation in the Bayesian deviation family, applied to the
/// deviator's sampled true values each trial.
#[derive(Clone, Debug)]
pub enum BidDeviation {
    Truthful,
    /// Swap the bids of the items the deviator ranks at `position` and
    /// `position + 1` (1-based).
    AdjacentRankSwap { position: usize },
    /// Random permutation of the deviator's bid vector.
    RandomPermutation,
    /// Multiply every bid by a positive factor.
    ScaleBids { factor: f64 },
}

impl BidDeviation {
    pub fn label(&self) -> String {
        match self {
            BidDeviation::Truthful => "truthful".into(),
            BidDeviation::AdjacentRankSwap { position } => {
                format!("adjacent-rank-swap@{position}")
            }
            BidDeviation::RandomPermutation => "random-permutation".into(),
            BidDeviation::ScaleBids { factor } => format!("scale-bids x{factor}"),
        }
    }

    fn apply(&self, truth: &[f64], rng: &mut RandomStream) -> Result<Vec<f64>> {
        match self {
            BidDeviation::Truthful => Ok(truth.to_vec()),
            BidDeviation::AdjacentRankSwap { position } => {
                let m = truth.len();
                if *position == 0 || *position >= m {
                    return Err(Error::InvalidArgument(format!(
                        "swap position must lie in 1..m, got {position}"
                    )));
                }
                let ranks = crate::mech::ranks_of_bids(truth);
                let mut at = vec![0usize; m + 1];
                for (j, &r) in ranks.iter().enumerate() {
                    at[r] = j;
                }
                let mut out = truth.to_vec();
                out.swap(at[*position], at[*position + 1]);
                Ok(out)
            }
            BidDeviation::RandomPermutation => {
                let mut out = truth.to_vec();
                for j in (1..out.len()).rev() {
                    let k = (rng.next_f64() * (j + 1) as f64) as usize % (j + 1);
                    out.swap(j, k);
                }
                Ok(out)
            }
            BidDeviation::ScaleBids { factor } => {
                if !(factor.is_finite() && *factor > 0.0) {
                    return Err(Error::InvalidArgument("scale factor must be positive".into()));
                }
                Ok(truth.iter().map(|x| x * factor).collect())
            }
        }
    }
}

/// Estimated expected gain of one deviation, with a 95% CI over shared
/// common-random-number trials.
#[derive(Clone, Debug, Serialize)]
pub struct BicRow {
    pub deviation: String,
    pub mean_gain: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub trials: usize,
}

/// Summary of a Bayesian incentive audit for the first agent.
#[derive(Clone, Debug, Serialize)]
pub struct BicSummary {
    pub rows: Vec<BicRow>,
    /// True iff no deviation's CI lower bound exceeds zero.
    pub pass: bool,
}

/// Monte Carlo best-response audit: agent 0 deviates, everyone else bids
/// their sampled true values. Truthful and deviating runs share the same
/// draws, so the per-trial gain is the paired difference.
pub fn bic_audit(
    spec: &MechanismSpec,
    dist: &DistributionSpec,
    n: usize,
    m: usize,
    trials: usize,
    deviations: &[BidDeviation],
    seed: u64,
) -> Result<BicSummary> {
    if n == 0 || m == 0 || trials == 0 {
        return Err(Error::InvalidArgument("bic_audit needs n, m, trials >= 1".into()));
    }
    let dists = [dist.clone()];
    let mut gains: Vec<Vec<f64>> = vec![Vec::with_capacity(trials); deviations.len()];
    for t in 0..trials {
        let mut rng = RandomStream::new(seed, t as u64);
        let values = ValuationMatrix::sample_iid(dist, n, m, &mut rng);
        let truth_util = deviator_utility(spec, Some(&dists), &values, 0, values.row(0))?;
        // Deviation randomness comes from a parallel stream so the value
        // draws stay identical across arms.
        let mut dev_rng = RandomStream::new(seed, (1 << 32) | t as u64);
        for (d, dev) in deviations.iter().enumerate() {
            let report = dev.apply(values.row(0), &mut dev_rng)?;
            let got = deviator_utility(spec, Some(&dists), &values, 0, &report)?;
            gains[d].push(got - truth_util);
        }
    }
    let rows: Vec<BicRow> = deviations
        .iter()
        .zip(&gains)
        .map(|(dev, g)| {
            let (mean, lo, hi) = mean_ci95(g);
            BicRow {
                deviation: dev.label(),
                mean_gain: mean,
                ci_lo: lo,
                ci_hi: hi,
                trials,
            }
        })
        .collect();
    let pass = rows.iter().all(|r| r.ci_lo <= 0.0);
    Ok(BicSummary { rows, pass })
}

/// Default deviation family: truthful sanity arm, adjacent swaps at the top
/// two positions, a random permutation, and bid scalings.
pub fn default_bic_deviations() -> Vec<BidDeviation> {
    vec![
        BidDeviation::Truthful,
        BidDeviation::AdjacentRankSwap { position: 1 },
        BidDeviation::AdjacentRankSwap { position: 2 },
        BidDeviation::RandomPermutation,
        BidDeviation::ScaleBids { factor: 2.0 },
        BidDeviation::ScaleBids { factor: 0.5 },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mech::ValuationMatrix;

    fn grid5() -> DeviationSearch {
        DeviationSearch::ExhaustiveGrid {
            grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
        }
    }

    #[test]
    fn pick_r_has_no_profitable_deviation() {
        let values =
            ValuationMatrix::from_rows(&[vec![0.5, 1.0, 0.25], vec![0.75, 0.75, 0.0]]).unwrap();
        let spec = MechanismSpec::PickR { r: vec![0.5, 0.5] };
        let out = dsic_audit(&spec, None, &values, &grid5(), 1_000_000).unwrap();
        assert!(out.witnesses.is_empty());
        assert!(!out.budget_exhausted);
    }

    #[test]
    fn welfare_max_witness_matches_expected_gain() {
        let values = ValuationMatrix::from_rows(&[vec![0.6, 0.4], vec![0.5, 0.5]]).unwrap();
        let spec = MechanismSpec::WelfareMax;
        let out = dsic_audit(&spec, None, &values, &grid5(), 1_000_000).unwrap();
        let best = out
            .witnesses
            .iter()
            .filter(|w| w.agent == 1)
            .map(|w| w.gain)
            .fold(0.0f64, f64::max);
        assert!((best - 0.5).abs() < 1e-12, "best gain {best}");
    }

    #[test]
    fn ranking_has_ex_post_witness() {
        let values = ValuationMatrix::from_rows(&[vec![0.9, 0.1], vec![0.8, 0.2]]).unwrap();
        let spec = MechanismSpec::Ranking;
        let out = dsic_audit(&spec, None, &values, &grid5(), 1_000_000).unwrap();
        assert!(out.witnesses.iter().any(|w| w.agent == 1 && w.gain > 0.1));
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let values = ValuationMatrix::from_rows(&[vec![0.6, 0.4], vec![0.5, 0.5]]).unwrap();
        let out = dsic_audit(&MechanismSpec::WelfareMax, None, &values, &grid5(), 10).unwrap();
        assert!(out.budget_exhausted);
        assert!(out.evaluations <= 10);
    }

    #[test]
    fn hill_climb_finds_welfare_max_witness() {
        let values = ValuationMatrix::from_rows(&[vec![0.6, 0.4], vec![0.5, 0.5]]).unwrap();
        let search = DeviationSearch::HillClimb { restarts: 20, steps: 50, seed: 3 };
        let out = dsic_audit(&MechanismSpec::WelfareMax, None, &values, &search, 100_000).unwrap();
        assert!(out.witnesses.iter().any(|w| w.agent == 1));
    }

    #[test]
    fn truthful_arm_gains_exactly_zero() {
        let d = crate::dist::DistributionSpec::uniform(0.0, 1.0).unwrap();
        let out = bic_audit(
            &MechanismSpec::Ranking,
            &d,
            2,
            4,
            200,
            &[BidDeviation::Truthful],
            11,
        )
        .unwrap();
        assert_eq!(out.rows[0].mean_gain, 0.0);
        assert_eq!(out.rows[0].ci_lo, 0.0);
        assert_eq!(out.rows[0].ci_hi, 0.0);
        assert!(out.pass);
    }

    #[test]
    fn ranking_top_swap_gain_is_strictly_negative() {
        // Two agents, m = 5: the deviator wins an item at rank t with
        // probability (m - t + 1) / m, so swapping ranks 1 and 2 loses
        // (1/m) * E[gap between the top two order statistics] = 1/(m(m+1)).
        let d = crate::dist::DistributionSpec::uniform(0.0, 1.0).unwrap();
        let m = 5;
        let out = bic_audit(
            &MechanismSpec::Ranking,
            &d,
            2,
            m,
            50_000,
            &[BidDeviation::AdjacentRankSwap { position: 1 }],
            14,
        )
        .unwrap();
        let row = &out.rows[0];
        let exact = -1.0 / (m as f64 * (m as f64 + 1.0));
        let se = (row.ci_hi - row.mean_gain) / 1.96;
        assert!(row.ci_hi < 0.0, "gain CI should sit below zero: {row:?}");
        assert!(
            (row.mean_gain - exact).abs() <= 4.0 * se,
            "mean {} too far from exact {exact} (se {se})",
            row.mean_gain
        );
    }

    #[test]
    fn welfare_max_overbidding_is_a_bic_violation() {
        let d = crate::dist::DistributionSpec::uniform(0.0, 1.0).unwrap();
        let out = bic_audit(
            &MechanismSpec::WelfareMax,
            &d,
            2,
            10,
            2000,
            &[BidDeviation::ScaleBids { factor: 2.0 }],
            13,
        )
        .unwrap();
        assert!(!out.pass);
        assert!(out.rows[0].ci_lo > 0.0);
    }
}
