//! Welfare accounting, envy measurement, and brute-force Pareto checks.

use crate::error::{Error, Result};
use crate::mech::{Allocation, ValuationMatrix};

/// Total utility of an allocation: each agent's value for its own bundle.
pub fn social_welfare(values: &ValuationMatrix, alloc: &Allocation) -> f64 {
    (0..values.m()).map(|j| values.value(alloc.owner(j), j)).sum()
}

/// Welfare of the per-item argmax assignment.
pub fn optimal_welfare(values: &ValuationMatrix) -> f64 {
    (0..values.m())
        .map(|j| {
            (0..values.n())
                .map(|i| values.value(i, j))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .sum()
}

/// Agent `viewer`'s value for the bundle held by `holder`.
pub fn bundle_utility(values: &ValuationMatrix, alloc: &Allocation, viewer: usize, holder: usize) -> f64 {
    (0..values.m())
        .filter(|&j| alloc.owner(j) == holder)
        .map(|j| values.value(viewer, j))
        .sum()
}

/// Pairwise envy margins u_i(A_i) - u_i(A_j); the allocation is envy-free
/// iff every margin is nonnegative.
#[derive(Clone, Debug)]
pub struct EnvyReport {
    n: usize,
    margins: Vec<f64>,
    envy_free: bool,
}

impl EnvyReport {
    /// Margin u_i(A_i) - u_i(A_j); zero on the diagonal.
    pub fn margin(&self, i: usize, j: usize) -> f64 {
        self.margins[i * self.n + j]
    }

    pub fn envy_free(&self) -> bool {
        self.envy_free
    }

    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn envy_check(values: &ValuationMatrix, alloc: &Allocation) -> EnvyReport {
    let n = values.n();
    // u_i(A_k) for all viewer/holder pairs in one pass over items.
    let mut cross = vec![0.0f64; n * n];
    for j in 0..values.m() {
        let holder = alloc.owner(j);
        for i in 0..n {
            cross[i * n + holder] += values.value(i, j);
        }
    }
    let mut margins = vec![0.0f64; n * n];
    let mut envy_free = true;
    for i in 0..n {
        for j in 0..n {
            let m = cross[i * n + i] - cross[i * n + j];
            margins[i * n + j] = m;
            if m < 0.0 {
                envy_free = false;
            }
        }
    }
    EnvyReport { n, margins, envy_free }
}

const PARETO_ENUMERATION_LIMIT: f64 = 1e7;
const DOMINANCE_TOL: f64 = 1e-9;

/// Brute-force alpha-Pareto check: true iff no allocation weakly dominates
/// the 1/alpha-scaled utility profile with a strict improvement somewhere.
/// Enumerates all n^m allocations; guarded at 1e7.
pub fn pareto_check(values: &ValuationMatrix, alloc: &Allocation, alpha: f64) -> Result<bool> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in (0,1], got {alpha}"
        )));
    }
    let n = values.n();
    let m = values.m();
    let count = (n as f64).powi(m as i32);
    if count > PARETO_ENUMERATION_LIMIT {
        return Err(Error::InstanceTooLarge {
            what: "pareto_check".into(),
            size: count,
            limit: PARETO_ENUMERATION_LIMIT,
        });
    }
    let mut target = vec![0.0f64; n];
    for j in 0..m {
        target[alloc.owner(j)] += values.value(alloc.owner(j), j) / alpha;
    }
    let mut owner = vec![0usize; m];
    let mut utils = vec![0.0f64; n];
    loop {
        utils.iter_mut().for_each(|u| *u = 0.0);
        for j in 0..m {
            utils[owner[j]] += values.value(owner[j], j);
        }
        let weakly = (0..n).all(|i| utils[i] >= target[i] - DOMINANCE_TOL);
        let strictly = (0..n).any(|i| utils[i] > target[i] + DOMINANCE_TOL);
        if weakly && strictly {
            return Ok(false);
        }
        // Odometer over owners.
        let mut j = 0;
        loop {
            if j == m {
                return Ok(true);
            }
            owner[j] += 1;
            if owner[j] < n {
                break;
            }
            owner[j] = 0;
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mech::{run_welfare_max, ValuationMatrix};
    use crate::rng::RandomStream;

    fn v(rows: &[Vec<f64>]) -> ValuationMatrix {
        ValuationMatrix::from_rows(rows).unwrap()
    }

    fn alloc(n: usize, owner: &[usize]) -> Allocation {
        Allocation::new(n, owner.to_vec()).unwrap()
    }

    #[test]
    fn welfare_examples() {
        let values = v(&[vec![1.0, 2.0], vec![3.0, 1.0]]);
        let a = alloc(2, &[0, 0]);
        assert_eq!(social_welfare(&values, &a), 3.0);
        assert_eq!(optimal_welfare(&values), 5.0);
    }

    #[test]
    fn welfare_max_attains_optimal_on_fuzzed_inputs() {
        let d = crate::dist::DistributionSpec::uniform(0.0, 1.0).unwrap();
        let mut rng = RandomStream::new(31, 0);
        for _ in 0..200 {
            let values = ValuationMatrix::sample_iid(&d, 3, 6, &mut rng);
            let a = run_welfare_max(&values);
            assert!((social_welfare(&values, &a) - optimal_welfare(&values)).abs() < 1e-12);
        }
    }

    #[test]
    fn welfare_is_invariant_under_item_relabeling() {
        let values = v(&[vec![0.3, 0.9, 0.1], vec![0.5, 0.2, 0.8]]);
        let a = alloc(2, &[0, 1, 1]);
        // Relabel items (0,1,2) -> (2,0,1) consistently in values and owners.
        let relabeled = v(&[vec![0.1, 0.3, 0.9], vec![0.8, 0.5, 0.2]]);
        let ra = alloc(2, &[1, 0, 1]);
        assert!((social_welfare(&values, &a) - social_welfare(&relabeled, &ra)).abs() < 1e-12);
    }

    #[test]
    fn envy_examples() {
        let values = v(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        let rep = envy_check(&values, &alloc(2, &[0, 1]));
        assert!(rep.envy_free());
        assert_eq!(rep.margin(0, 1), 0.0);

        let rep = envy_check(&values, &alloc(2, &[0, 0]));
        assert!(!rep.envy_free());
        assert!(rep.margin(1, 0) < 0.0);
    }

    #[test]
    fn balanced_pick_envy_is_one_sided_noise() {
        // Pick-(1/2,1/2) on U[0,1]: the picker's margin is strongly positive,
        // while the second agent's margin is symmetric noise around zero, so
        // full envy-freeness lands near frequency 1/2.
        let d = crate::dist::DistributionSpec::uniform(0.0, 1.0).unwrap();
        let mut rng = RandomStream::new(32, 0);
        let trials = 300;
        let mut ef = 0usize;
        let mut picker_ok = 0usize;
        for _ in 0..trials {
            let values = ValuationMatrix::sample_iid(&d, 2, 1000, &mut rng);
            let a = crate::mech::run_pick_r(&[0.5, 0.5], &values).unwrap();
            let rep = envy_check(&values, &a);
            ef += usize::from(rep.envy_free());
            picker_ok += usize::from(rep.margin(0, 1) >= 0.0);
        }
        assert_eq!(picker_ok, trials);
        let freq = ef as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.15, "EF frequency {freq}");
    }

    #[test]
    fn welfare_max_is_envy_free_with_high_probability() {
        let d = crate::dist::DistributionSpec::uniform(0.0, 1.0).unwrap();
        let mut rng = RandomStream::new(35, 0);
        let trials = 200;
        let mut ef = 0usize;
        for _ in 0..trials {
            let values = ValuationMatrix::sample_iid(&d, 2, 2000, &mut rng);
            let a = run_welfare_max(&values);
            ef += usize::from(envy_check(&values, &a).envy_free());
        }
        assert!(ef as f64 / trials as f64 >= 0.99, "EF in {ef}/{trials} trials");
    }

    #[test]
    fn pareto_examples() {
        // Welfare max is Pareto optimal at alpha = 1.
        let d = crate::dist::DistributionSpec::uniform(0.0, 1.0).unwrap();
        let mut rng = RandomStream::new(33, 0);
        for _ in 0..50 {
            let values = ValuationMatrix::sample_iid(&d, 2, 6, &mut rng);
            let a = run_welfare_max(&values);
            assert!(pareto_check(&values, &a, 1.0).unwrap());
        }

        // Swapping the matched items is dominated.
        let values = v(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(!pareto_check(&values, &alloc(2, &[1, 0]), 1.0).unwrap());

        // The alpha = 0.5 relaxation accepts an allocation at half the optimum.
        let values = v(&[vec![0.6, 0.5], vec![0.5, 0.6]]);
        let half = alloc(2, &[1, 0]); // each agent gets 0.5 instead of 0.6
        assert!(!pareto_check(&values, &half, 1.0).unwrap());
        assert!(pareto_check(&values, &half, 0.5).unwrap());
    }

    #[test]
    fn pareto_guards_instance_size() {
        let d = crate::dist::DistributionSpec::uniform(0.0, 1.0).unwrap();
        let mut rng = RandomStream::new(34, 0);
        let values = ValuationMatrix::sample_iid(&d, 3, 20, &mut rng);
        let a = run_welfare_max(&values);
        assert!(matches!(
            pareto_check(&values, &a, 1.0),
            Err(Error::InstanceTooLarge { .. })
        ));
    }
}
