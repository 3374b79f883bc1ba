//! The i.i.d. optimal-stopping side of the quantile-threshold correspondence:
//! threshold stopping rules, exact backward-induction optima, and the
//! asymptotic constant beta solved from its integral equation.

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::numeric::{adaptive_simpson, bisect};

/// Quantile-threshold stopping rule over a fixed horizon: step i accepts a
/// draw whose quantile clears 1 - s_i; the final threshold is 1 so the rule
/// always stops.
#[derive(Clone, Debug, PartialEq)]
pub struct StoppingRule {
    s: Vec<f64>,
}

impl StoppingRule {
    pub fn new(s: Vec<f64>) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidArgument("stopping rule needs a horizon >= 1".into()));
        }
        if s.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidArgument("thresholds must lie in [0,1]".into()));
        }
        if (s[s.len() - 1] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "final threshold must equal 1, got {}",
                s[s.len() - 1]
            )));
        }
        Ok(StoppingRule { s })
    }

    pub fn horizon(&self) -> usize {
        self.s.len()
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.s
    }
}

/// Continuation values of the optimal stopping rule: `values[i]` is the
/// expected reward of play from step i+1 on (0-indexed), so `values[n-1]`
/// equals the distribution's mean.
#[derive(Clone, Debug)]
pub struct DpSolution {
    values: Vec<f64>,
}

impl DpSolution {
    /// V_1: expected reward of the optimal rule over the whole horizon.
    pub fn optimal_value(&self) -> f64 {
        self.values[0]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn horizon(&self) -> usize {
        self.values.len()
    }

    /// Value thresholds of the optimal rule: accept x at step i iff
    /// x >= V_{i+1}; the final threshold is 0 (always accept).
    pub fn value_thresholds(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self.values[1..].to_vec();
        t.push(0.0);
        t
    }
}

/// Run a quantile-threshold stopping rule on realized draws; returns the
/// 0-indexed stop step and the accepted value. The final step always clears.
pub fn run_qtp(
    rule: &StoppingRule,
    dist: &DistributionSpec,
    realized: &[f64],
) -> Result<(usize, f64)> {
    if realized.len() != rule.horizon() {
        return Err(Error::InvalidArgument(format!(
            "{} realized values for horizon {}",
            realized.len(),
            rule.horizon()
        )));
    }
    for (i, (&x, &s)) in realized.iter().zip(rule.thresholds()).enumerate() {
        if dist.cdf(x) >= 1.0 - s {
            return Ok((i, x));
        }
    }
    let last = realized.len() - 1;
    Ok((last, realized[last]))
}

/// Exact backward induction: V_n = E[X] and V_i = E[max(X, V_{i+1})].
pub fn dp_optimal_values(dist: &DistributionSpec, n: usize) -> Result<DpSolution> {
    if n == 0 {
        return Err(Error::InvalidArgument("horizon must be >= 1".into()));
    }
    let mut values = vec![0.0; n];
    values[n - 1] = dist.mean();
    for i in (0..n - 1).rev() {
        values[i] = dist.expected_max_with_floor(values[i + 1]);
    }
    Ok(DpSolution { values })
}

/// Competitive ratio of the optimal stopping rule against the prophet:
/// V_1 / E[max of n draws].
pub fn optimal_ratio(dist: &DistributionSpec, n: usize) -> Result<f64> {
    if dist.mean() <= 0.0 {
        return Err(Error::InvalidArgument(
            "optimal_ratio needs a distribution with positive mean".into(),
        ));
    }
    let dp = dp_optimal_values(dist, n)?;
    Ok(dp.optimal_value() / dist.expected_max(n as u32)?)
}

/// Optimal quantile-threshold rule from the DP solution:
/// s_i = 1 - F(V_{i+1}), with s_n = 1.
pub fn best_threshold_rule(dist: &DistributionSpec, n: usize) -> Result<StoppingRule> {
    let dp = dp_optimal_values(dist, n)?;
    let mut s: Vec<f64> = dp.values[1..].iter().map(|&v| 1.0 - dist.cdf(v)).collect();
    s.push(1.0);
    StoppingRule::new(s)
}

/// Left side of the asymptotic-ratio integral equation, in the reciprocal
/// parameterization z = 1/beta:
/// I(z) = integral over [0,1] of dy / (y(1 - ln y) + z - 1).
///
/// The substitution y = e^{-u} removes the y ln y kink at the origin; the
/// integrand then decays like e^{-u}, truncated where it is below 1e-26.
pub fn beta_equation_lhs(z: f64) -> f64 {
    let f = |u: f64| {
        let y = (-u).exp();
        y / (y * (1.0 + u) + z - 1.0)
    };
    adaptive_simpson(&f, 0.0, 60.0, 1e-11)
}

/// Solve the integral equation for the asymptotic optimal ratio beta of the
/// i.i.d. stopping problem.
///
/// The equation's displayed variable is the reciprocal 1/beta: with
/// beta < 1 the denominator y(1 - ln y) + beta - 1 changes sign inside
/// (0,1) and the integral diverges, so the bisection runs on z = 1/beta in
/// (1, 2), where I is finite and strictly decreasing, and maps the root
/// back. Returns beta with residual |I(1/beta) - 1| <= 1e-8.
pub fn solve_beta() -> Result<f64> {
    let f = |z: f64| beta_equation_lhs(z) - 1.0;
    let z = bisect(&f, 1.01, 2.0, 1e-12, 200)?;
    let beta = 1.0 / z;
    let residual = (beta_equation_lhs(1.0 / beta) - 1.0).abs();
    if residual > 1e-8 {
        return Err(Error::NoConvergence {
            what: "solve_beta".into(),
            residuals: vec![residual],
        });
    }
    Ok(beta)
}
