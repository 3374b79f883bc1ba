//! Selection of the two-agent pick share: the welfare-optimal share when a
//! distributional envy condition holds, a near-balanced fallback otherwise.

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::numeric::integrate_with_breakpoints;

/// Share at which the two-agent pick mechanism attains its best worst-case
/// welfare ratio: (2 - sqrt(2)) / 2.
pub const TWO_AGENT_OPTIMAL_R: f64 = (2.0 - std::f64::consts::SQRT_2) / 2.0;

/// Which branch [`select_two_agent_r`] took.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectorBranch {
    /// The envy integral is strictly positive: the welfare-optimal share is
    /// also envy-free with high probability.
    StrictEnvyCondition,
    /// Near-balanced fallback share 1/2 - m^(-1/4).
    Fallback,
    /// m <= 16 makes the fallback nonpositive; clamped to 1/m. The scenario
    /// is below the asymptotic regime.
    FallbackClamped,
}

/// Outcome of the two-agent share selection.
#[derive(Clone, Copy, Debug)]
pub struct SelectedR {
    pub r: f64,
    pub branch: SelectorBranch,
    /// Value of the envy integral at the welfare-optimal share.
    pub condition_a: f64,
}

/// Envy condition integral A = integral over s of r - |F(s) - (1 - r)|,
/// truncated at the support's upper end. The first agent's envy condition
/// for the Pick-r mechanism holds strictly iff A > 0.
pub fn integral_condition_a(dist: &DistributionSpec, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "share must lie in (0,1), got {r}"
        )));
    }
    let (_, hi) = dist.support();
    let c = 1.0 - r;
    let f = |s: f64| r - (dist.cdf(s) - c).abs();
    // Split at CDF kinks and at the crossing F(s) = 1 - r so the adaptive
    // pass integrates linear pieces exactly.
    let mut cuts = dist.value_breakpoints();
    if let Ok(x) = dist.inverse_cdf(c) {
        cuts.push(x);
    }
    Ok(integrate_with_breakpoints(&f, 0.0, hi, &cuts, 1e-8))
}

/// Choose the two-agent pick share for a known distribution and item count:
/// the welfare-optimal share when its strict envy condition holds, otherwise
/// the near-balanced fallback 1/2 - m^(-1/4) (clamped to 1/m when m <= 16).
///
/// The branch test uses A > 1e-9 so quadrature noise on a boundary case
/// (for example the uniform distribution, where A = 0 exactly) resolves to
/// the fallback, matching the strictness of the envy condition.
pub fn select_two_agent_r(dist: &DistributionSpec, m: usize) -> Result<SelectedR> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let a = integral_condition_a(dist, TWO_AGENT_OPTIMAL_R)?;
    if a > 1e-9 {
        return Ok(SelectedR {
            r: TWO_AGENT_OPTIMAL_R,
            branch: SelectorBranch::StrictEnvyCondition,
            condition_a: a,
        });
    }
    let fallback = 0.5 - (m as f64).powf(-0.25);
    if fallback <= 0.0 {
        Ok(SelectedR {
            r: 1.0 / m as f64,
            branch: SelectorBranch::FallbackClamped,
            condition_a: a,
        })
    } else {
        Ok(SelectedR {
            r: fallback,
            branch: SelectorBranch::Fallback,
            condition_a: a,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_atom() -> DistributionSpec {
        DistributionSpec::piecewise_linear_cdf(vec![
            (0.0, 0.0),
            (0.01, 0.707),
            (0.99, 0.707),
            (1.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn uniform_condition_integral_is_zero() {
        let d = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let a = integral_condition_a(&d, TWO_AGENT_OPTIMAL_R).unwrap();
        assert!(a.abs() <= 1e-9, "A = {a}");
    }

    #[test]
    fn narrow_uniform_condition_integral_matches_closed_form() {
        // Mass sits above 0.9: the region s < 0.9 contributes (2r - 1) * 0.9
        // and the ramp's own contribution vanishes at this r.
        let d = DistributionSpec::uniform(0.9, 1.0).unwrap();
        let a = integral_condition_a(&d, TWO_AGENT_OPTIMAL_R).unwrap();
        let exact = 0.9 * (2.0 * TWO_AGENT_OPTIMAL_R - 1.0);
        assert!((a - exact).abs() <= 1e-6, "A = {a}, exact = {exact}");
        assert!((exact - (-0.3727922061357855)).abs() < 1e-12);
    }

    #[test]
    fn high_variance_two_atom_condition_is_positive() {
        let a = integral_condition_a(&two_atom(), TWO_AGENT_OPTIMAL_R).unwrap();
        assert!(a > 0.25, "A = {a}");
    }

    #[test]
    fn selector_branches() {
        let adv = DistributionSpec::adversarial(0.01, 0.001).unwrap();
        let sel = select_two_agent_r(&adv, 4000).unwrap();
        assert_eq!(sel.branch, SelectorBranch::StrictEnvyCondition);
        assert!((sel.r - TWO_AGENT_OPTIMAL_R).abs() < 1e-15);

        let sel = select_two_agent_r(&two_atom(), 4000).unwrap();
        assert_eq!(sel.branch, SelectorBranch::StrictEnvyCondition);

        let narrow = DistributionSpec::uniform(0.9, 1.0).unwrap();
        let sel = select_two_agent_r(&narrow, 10_000).unwrap();
        assert_eq!(sel.branch, SelectorBranch::Fallback);
        assert!((sel.r - 0.4).abs() < 1e-12, "r = {}", sel.r);

        // A = 0 boundary resolves to the fallback.
        let u = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let sel = select_two_agent_r(&u, 4000).unwrap();
        assert_eq!(sel.branch, SelectorBranch::Fallback);

        // Below the asymptotic regime the fallback clamps to 1/m.
        let sel = select_two_agent_r(&u, 16).unwrap();
        assert_eq!(sel.branch, SelectorBranch::FallbackClamped);
        assert!((sel.r - 1.0 / 16.0).abs() < 1e-15);
    }
}
