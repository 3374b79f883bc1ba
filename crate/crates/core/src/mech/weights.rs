//! Weight solver for non-identical agents: find w such that each agent's
//! weighted value w_i X_i is the argmax with probability exactly 1/n.

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::numeric::integrate_with_breakpoints;

const TARGET_TOL: f64 = 1e-4;
const MAX_ITERS: usize = 400;

/// P(agent i attains the weighted argmax) by quadrature in agent i's
/// quantile space: integral over u of prod_{k != i} F_k(w_i F_i^{-1}(u) / w_k).
fn win_probability(dists: &[DistributionSpec], weights: &[f64], i: usize) -> f64 {
    let di = &dists[i];
    let f = |u: f64| -> f64 {
        let x = di.inverse_cdf(u).expect("u in [0,1]");
        let mut p = 1.0;
        for (k, dk) in dists.iter().enumerate() {
            if k != i {
                p *= dk.cdf(weights[i] * x / weights[k]);
            }
        }
        p
    };
    // Kinks occur where the scaled value crosses another agent's breakpoints.
    let mut cuts = Vec::new();
    for (k, dk) in dists.iter().enumerate() {
        if k == i {
            continue;
        }
        for bp in dk.value_breakpoints() {
            cuts.push(di.cdf(weights[k] * bp / weights[i]));
        }
    }
    integrate_with_breakpoints(&f, 0.0, 1.0, &cuts, 1e-8)
}

/// Win probability of every agent under given weights, by quadrature.
pub fn weighted_win_probabilities(dists: &[DistributionSpec], weights: &[f64]) -> Vec<f64> {
    (0..dists.len()).map(|i| win_probability(dists, weights, i)).collect()
}

/// Solve for positive weights, normalized to w_1 = 1, under which every
/// agent wins the per-item weighted argmax with probability 1/n.
///
/// Damped fixed-point iteration on log-weights; win probabilities are
/// evaluated by quadrature. Fails with the residual vector if the iteration
/// budget runs out. Requires interval-support distributions.
pub fn solve_weights(dists: &[DistributionSpec]) -> Result<Vec<f64>> {
    let n = dists.len();
    if n == 0 {
        return Err(Error::InvalidArgument("no distributions supplied".into()));
    }
    for d in dists {
        if !d.has_interval_support() {
            return Err(Error::InvalidDistribution(format!(
                "weight solving needs interval support and a bounded density, got {:?}",
                d.desc()
            )));
        }
    }
    if n == 1 {
        return Ok(vec![1.0]);
    }
    // Exactly solvable case: every distribution a scale multiple of the
    // first. Weights 1/c_i make the weighted values identically distributed,
    // so each agent wins with probability exactly 1/n by exchangeability.
    // This keeps knife-edge rank ties exact instead of solver-noise-ordered.
    if let Some(scales) = dists[1..]
        .iter()
        .map(|d| dists[0].scale_relation(d))
        .collect::<Option<Vec<f64>>>()
    {
        let mut w = vec![1.0];
        w.extend(scales.iter().map(|c| 1.0 / c));
        return Ok(w);
    }
    let target = 1.0 / n as f64;
    let mut log_w = vec![0.0f64; n];
    let mut residuals = vec![0.0f64; n];
    for iter in 0..MAX_ITERS {
        let w: Vec<f64> = log_w.iter().map(|x| x.exp()).collect();
        let probs: Vec<f64> = (0..n).map(|i| win_probability(dists, &w, i)).collect();
        for i in 0..n {
            residuals[i] = probs[i] - target;
        }
        let worst = residuals.iter().fold(0.0f64, |a, r| a.max(r.abs()));
        if worst <= TARGET_TOL {
            let base = w[0];
            return Ok(w.into_iter().map(|x| x / base).collect());
        }
        // If an agent wins too often, shrink its weight. Damping 0.5 keeps
        // the iteration stable for bounded densities.
        let step = if iter < 20 { 0.5 } else { 0.25 };
        for i in 0..n {
            log_w[i] += step * (target.ln() - probs[i].max(1e-12).ln());
        }
        let shift = log_w[0];
        log_w.iter_mut().for_each(|x| *x -= shift);
    }
    Err(Error::NoConvergence {
        what: "solve_weights".into(),
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomStream;

    #[test]
    fn identical_distributions_get_unit_weights() {
        let d = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let w = solve_weights(&[d.clone(), d.clone(), d]).unwrap();
        assert_eq!(w, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn scaled_uniforms_get_inverse_scale_weights() {
        // 2 * U[0,1] and 1 * U[0,2] are equal in distribution, so w = (1, 1/2)
        // exactly via the scale fast path.
        let d1 = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let d2 = DistributionSpec::uniform(0.0, 2.0).unwrap();
        let w = solve_weights(&[d1.clone(), d2.clone()]).unwrap();
        assert_eq!(w, vec![1.0, 0.5]);
        for i in 0..2 {
            let p = win_probability(&[d1.clone(), d2.clone()], &w, i);
            assert!((p - 0.5).abs() <= 1e-3, "agent {i} wins with p = {p}");
        }
    }

    #[test]
    fn offset_support_solution_matches_monte_carlo() {
        let d1 = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let d2 = DistributionSpec::uniform(0.5, 1.0).unwrap();
        let w = solve_weights(&[d1.clone(), d2.clone()]).unwrap();
        // Closed form: with w2 = 2/3, w2 * U[0.5,1] is U[1/3, 2/3] and
        // P(U[0,1] beats it) = 1/2.
        assert!((w[1] - 2.0 / 3.0).abs() < 2e-3, "w = {w:?}");
        let mut rng = RandomStream::new(17, 0);
        let trials = 200_000;
        let mut wins = 0usize;
        for _ in 0..trials {
            let x1 = d1.sample(&mut rng);
            let x2 = d2.sample(&mut rng);
            if w[0] * x1 > w[1] * x2 {
                wins += 1;
            }
        }
        let freq = wins as f64 / trials as f64;
        let se = (0.25f64 / trials as f64).sqrt();
        assert!((freq - 0.5).abs() <= 4.0 * se + 1e-3, "freq = {freq}");
    }

    #[test]
    fn rejects_non_interval_support() {
        let ok = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let atoms = DistributionSpec::adversarial(0.01, 0.0).unwrap();
        assert!(solve_weights(&[ok, atoms]).is_err());
    }
}
