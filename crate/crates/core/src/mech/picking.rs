//! Quota serial dictatorships (Pick-r), quantile-threshold rules (QT-s),
//! and per-item welfare maximization.

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::mech::{Allocation, ValuationMatrix};

fn validate_shares(r: &[f64]) -> Result<()> {
    if r.is_empty() {
        return Err(Error::InvalidMechanism("share vector is empty".into()));
    }
    if r.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidMechanism(
            "shares must be finite and nonnegative".into(),
        ));
    }
    let sum: f64 = r.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidMechanism(format!(
            "shares must sum to 1, got {sum}"
        )));
    }
    Ok(())
}

/// Integer quotas t_i = floor(m * cum_i) - floor(m * cum_{i-1}) for the
/// cumulative shares cum_i; each t_i is floor(r_i m) or ceil(r_i m) and the
/// quotas exhaust all m items.
pub fn pick_quotas(r: &[f64], m: usize) -> Result<Vec<usize>> {
    validate_shares(r)?;
    let mut quotas = Vec::with_capacity(r.len());
    let mut cum = 0.0;
    let mut prev = 0usize;
    for (i, ri) in r.iter().enumerate() {
        cum += ri;
        let c = if i + 1 == r.len() {
            m
        } else {
            ((m as f64 * cum).floor() as usize).min(m)
        };
        quotas.push(c.saturating_sub(prev));
        prev = prev.max(c);
    }
    Ok(quotas)
}

/// Item indices sorted by an agent's bid, best first; equal bids are ordered
/// by lowest item index.
fn descending_by_bid(items: &[usize], bids: &[f64]) -> Vec<usize> {
    let mut sorted = items.to_vec();
    sorted.sort_by(|&a, &b| {
        bids[b].partial_cmp(&bids[a]).unwrap().then(a.cmp(&b))
    });
    sorted
}

/// Quota serial dictatorship: agent 1 takes its `quotas[0]` favorite items,
/// agent 2 its `quotas[1]` favorites of the remainder, and so on.
pub fn run_serial_dictator(quotas: &[usize], bids: &ValuationMatrix) -> Result<Allocation> {
    if quotas.len() != bids.n() {
        return Err(Error::InvalidMechanism(format!(
            "{} quotas for {} agents",
            quotas.len(),
            bids.n()
        )));
    }
    if quotas.iter().sum::<usize>() != bids.m() {
        return Err(Error::InvalidMechanism(format!(
            "quotas sum to {}, expected m = {}",
            quotas.iter().sum::<usize>(),
            bids.m()
        )));
    }
    let mut owner = vec![0usize; bids.m()];
    let mut remaining: Vec<usize> = (0..bids.m()).collect();
    for (i, &t) in quotas.iter().enumerate() {
        let ordered = descending_by_bid(&remaining, bids.row(i));
        for &j in ordered.iter().take(t) {
            owner[j] = i;
        }
        remaining = ordered[t..].to_vec();
        remaining.sort_unstable();
    }
    Allocation::new(bids.n(), owner)
}

/// Pick-r mechanism: quotas derived from the share vector, then serial picks.
pub fn run_pick_r(r: &[f64], bids: &ValuationMatrix) -> Result<Allocation> {
    if r.len() != bids.n() {
        return Err(Error::InvalidMechanism(format!(
            "{} shares for {} agents",
            r.len(),
            bids.n()
        )));
    }
    let quotas = pick_quotas(r, bids.m())?;
    run_serial_dictator(&quotas, bids)
}

fn validate_thresholds(s: &[f64], n: usize) -> Result<()> {
    if s.len() != n {
        return Err(Error::InvalidMechanism(format!(
            "{} thresholds for {n} agents",
            s.len()
        )));
    }
    if s.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::InvalidMechanism(
            "thresholds must lie in [0,1]".into(),
        ));
    }
    if (s[n - 1] - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidMechanism(format!(
            "last threshold must equal 1, got {}",
            s[n - 1]
        )));
    }
    Ok(())
}

/// QT-s mechanism: item j goes to the first agent i whose value quantile
/// clears 1 - s_i. The last agent has s_n = 1 and accepts everything left.
pub fn run_qt_s(s: &[f64], dist: &DistributionSpec, values: &ValuationMatrix) -> Result<Allocation> {
    validate_thresholds(s, values.n())?;
    let cut: Vec<f64> = s.iter().map(|si| 1.0 - si).collect();
    let mut owner = vec![values.n() - 1; values.m()];
    for j in 0..values.m() {
        for i in 0..values.n() {
            if dist.cdf(values.value(i, j)) >= cut[i] {
                owner[j] = i;
                break;
            }
        }
    }
    Allocation::new(values.n(), owner)
}

/// Each item to its highest bidder; bid ties go to the lowest agent index.
pub fn run_welfare_max(bids: &ValuationMatrix) -> Allocation {
    let mut owner = vec![0usize; bids.m()];
    for j in 0..bids.m() {
        let mut best = 0usize;
        for i in 1..bids.n() {
            if bids.value(i, j) > bids.value(best, j) {
                best = i;
            }
        }
        owner[j] = best;
    }
    Allocation { n: bids.n(), owner }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mech::TWO_AGENT_OPTIMAL_R;

    fn v(rows: &[Vec<f64>]) -> ValuationMatrix {
        ValuationMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn quota_examples() {
        assert_eq!(pick_quotas(&[0.5, 0.5], 5).unwrap(), vec![2, 3]);
        let third = 1.0 / 3.0;
        assert_eq!(pick_quotas(&[third, third, third], 10).unwrap(), vec![3, 3, 4]);
        let r = [TWO_AGENT_OPTIMAL_R, 1.0 - TWO_AGENT_OPTIMAL_R];
        assert_eq!(pick_quotas(&r, 100).unwrap(), vec![29, 71]);
    }

    #[test]
    fn quota_invariants_hold_on_fuzzed_shares() {
        let mut rng = crate::rng::RandomStream::new(11, 0);
        for _ in 0..500 {
            let n = 1 + (rng.next_f64() * 5.0) as usize;
            let mut r: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
            let sum: f64 = r.iter().sum();
            r.iter_mut().for_each(|x| *x /= sum);
            let m = 1 + (rng.next_f64() * 5000.0) as usize;
            let t = pick_quotas(&r, m).unwrap();
            assert_eq!(t.iter().sum::<usize>(), m);
            for (ti, ri) in t.iter().zip(&r) {
                let lo = (ri * m as f64).floor() as usize;
                let hi = (ri * m as f64).ceil() as usize;
                assert!(
                    *ti >= lo.saturating_sub(1) && *ti <= hi + 1,
                    "quota {ti} outside [{lo}, {hi}]"
                );
            }
        }
    }

    #[test]
    fn quota_rejects_bad_shares() {
        assert!(pick_quotas(&[0.4, 0.4], 10).is_err());
        assert!(pick_quotas(&[-0.1, 1.1], 10).is_err());
        assert!(pick_quotas(&[], 10).is_err());
    }

    #[test]
    fn pick_r_examples() {
        let a = run_pick_r(&[1.0 / 3.0, 2.0 / 3.0], &v(&[vec![5.0, 1.0, 3.0], vec![1.0, 1.0, 1.0]]))
            .unwrap();
        assert_eq!(a.owners(), &[0, 1, 1]);

        let a = run_pick_r(&[1.0], &v(&[vec![2.0, 1.0]])).unwrap();
        assert_eq!(a.owners(), &[0, 0]);

        // Ties broken by lowest item index.
        let a = run_pick_r(
            &[0.5, 0.5],
            &v(&[vec![4.0, 4.0, 1.0, 1.0], vec![1.0, 1.0, 1.0, 1.0]]),
        )
        .unwrap();
        assert_eq!(a.owners(), &[0, 0, 1, 1]);
    }

    #[test]
    fn qt_s_examples() {
        let d = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let a = run_qt_s(&[0.5, 1.0], &d, &v(&[vec![0.7], vec![0.9]])).unwrap();
        assert_eq!(a.owners(), &[0]);
        let a = run_qt_s(&[0.5, 1.0], &d, &v(&[vec![0.3], vec![0.1]])).unwrap();
        assert_eq!(a.owners(), &[1]);
        assert!(run_qt_s(&[0.5, 0.9], &d, &v(&[vec![0.3], vec![0.1]])).is_err());
    }

    #[test]
    fn qt_s_per_item_probability_matches_shares() {
        // With s_i = r_i / (1 - sum_{k<i} r_k), agent i takes a given item
        // with probability exactly r_i.
        let d = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let r = [0.3, 0.5, 0.2];
        let s = [0.3, 0.5 / 0.7, 1.0];
        let mut rng = crate::rng::RandomStream::new(21, 0);
        let m = 200_000;
        let values = ValuationMatrix::sample_iid(&d, 3, m, &mut rng);
        let a = run_qt_s(&s, &d, &values).unwrap();
        let sizes = a.bundle_sizes();
        for (i, ri) in r.iter().enumerate() {
            let freq = sizes[i] as f64 / m as f64;
            let se = (ri * (1.0 - ri) / m as f64).sqrt();
            assert!(
                (freq - ri).abs() <= 4.0 * se,
                "agent {i}: freq {freq}, share {ri}"
            );
        }
    }

    #[test]
    fn welfare_max_examples() {
        let a = run_welfare_max(&v(&[vec![1.0, 2.0], vec![3.0, 1.0]]));
        assert_eq!(a.owners(), &[1, 0]);
        let a = run_welfare_max(&v(&[vec![1.0, 1.0], vec![1.0, 1.0]]));
        assert_eq!(a.owners(), &[0, 0]);
        let a = run_welfare_max(&v(&[vec![0.4, 0.6]]));
        assert_eq!(a.owners(), &[0, 0]);
    }
}
