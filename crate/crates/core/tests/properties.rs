//! Property tests for the invariants every component must keep regardless
//! of input: allocations partition the items, quotas exhaust them, quantile
//! arithmetic stays consistent, and ordinal rules ignore cardinal scale.

use proptest::prelude::*;

use fairdiv::audit::matched_thresholds;
use fairdiv::dist::DistributionSpec;
use fairdiv::mech::{
    pick_quotas, run_pick_r, run_qt_s, run_ranking, run_welfare_max, ValuationMatrix,
};

fn assert_partition(alloc: &fairdiv::mech::Allocation, n: usize, m: usize) {
    assert_eq!(alloc.m(), m);
    assert!(alloc.owners().iter().all(|&o| o < n));
    assert_eq!(alloc.bundle_sizes().iter().sum::<usize>(), m);
}

proptest! {
    #[test]
    fn quotas_round_shares_and_exhaust_items(
        n in 1usize..6,
        m in 1usize..5000,
        seed_shares in proptest::collection::vec(0.01f64..1.0, 6),
    ) {
        let raw = &seed_shares[..n];
        let sum: f64 = raw.iter().sum();
        let r: Vec<f64> = raw.iter().map(|x| x / sum).collect();
        let t = pick_quotas(&r, m).unwrap();
        prop_assert_eq!(t.iter().sum::<usize>(), m);
        for (ti, ri) in t.iter().zip(&r) {
            // Each quota is the floor or ceiling of its ideal share, up to
            // float fuzz in the cumulative sums.
            let ideal = ri * m as f64;
            let lo = (ideal - 1e-6).floor();
            let hi = (ideal + 1e-6).ceil();
            prop_assert!(
                (*ti as f64) >= lo && (*ti as f64) <= hi,
                "quota {} for ideal {}", ti, ideal
            );
        }
    }

    #[test]
    fn mechanisms_always_output_partitions(
        n in 1usize..5,
        m in 1usize..12,
        flat in proptest::collection::vec(0.0f64..10.0, 60),
    ) {
        let values = ValuationMatrix::new(n, m, flat[..n * m].to_vec()).unwrap();
        let alloc = run_welfare_max(&values);
        assert_partition(&alloc, n, m);
        let alloc = run_ranking(&values).unwrap();
        assert_partition(&alloc, n, m);
        let r = vec![1.0 / n as f64; n];
        let alloc = run_pick_r(&r, &values).unwrap();
        assert_partition(&alloc, n, m);
    }

    #[test]
    fn qt_rule_outputs_partitions_on_scaled_values(
        n in 1usize..5,
        m in 1usize..12,
        flat in proptest::collection::vec(0.0f64..1.0, 60),
        cut in 0.0f64..1.0,
    ) {
        let dist = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let values = ValuationMatrix::new(n, m, flat[..n * m].to_vec()).unwrap();
        let mut s = vec![cut; n];
        s[n - 1] = 1.0;
        let alloc = run_qt_s(&s, &dist, &values).unwrap();
        assert_partition(&alloc, n, m);
    }

    #[test]
    fn ranking_ignores_strictly_increasing_transforms(
        m in 1usize..10,
        flat in proptest::collection::vec(0.0f64..1.0, 30),
        scale in 0.1f64..9.0,
        shift in 0.0f64..3.0,
        agent in 0usize..3,
    ) {
        let values = ValuationMatrix::new(3, m, flat[..3 * m].to_vec()).unwrap();
        let before = run_ranking(&values).unwrap();
        let row: Vec<f64> = values.row(agent).iter().map(|x| shift + scale * x).collect();
        let after = run_ranking(&values.with_row(agent, &row).unwrap()).unwrap();
        prop_assert_eq!(before.owners(), after.owners());
    }

    #[test]
    fn piecewise_cdf_quantile_consistency(
        raw in proptest::collection::vec((0.01f64..1.0, 0.01f64..1.0), 2..8),
        q in 0.0f64..1.0,
    ) {
        // Build a valid CDF from positive increments in x and in F.
        let mut x = 0.0;
        let mut f = 0.0;
        let mut points = vec![(0.0, 0.0)];
        let total: f64 = raw.iter().map(|(_, df)| df).sum();
        for (dx, df) in &raw {
            x += dx;
            f += df / total;
            points.push((x, f.min(1.0)));
        }
        points.last_mut().unwrap().1 = 1.0;
        let dist = DistributionSpec::piecewise_linear_cdf(points).unwrap();
        // CDF is nondecreasing along the support.
        let (lo, hi) = dist.support();
        let mut prev = -1.0;
        for k in 0..=50 {
            let xx = lo + (hi - lo) * k as f64 / 50.0;
            let c = dist.cdf(xx);
            prop_assert!(c >= prev - 1e-12);
            prev = c;
        }
        // Quantile round trip and tail decomposition.
        let xq = dist.inverse_cdf(q).unwrap();
        prop_assert!(dist.cdf(xq) >= q - 1e-9);
        if q > 0.0 && q < 1.0 {
            let parts = q * dist.lower_tail_expectation(q).unwrap()
                + (1.0 - q) * dist.tail_expectation(q).unwrap();
            prop_assert!((parts - dist.mean()).abs() < 1e-9);
        }
    }

    #[test]
    fn matched_thresholds_are_valid_and_terminal(n in 1usize..7, raw in proptest::collection::vec(0.01f64..1.0, 7)) {
        let sum: f64 = raw[..n].iter().sum();
        let r: Vec<f64> = raw[..n].iter().map(|x| x / sum).collect();
        let s = matched_thresholds(&r).unwrap();
        prop_assert_eq!(s.len(), n);
        prop_assert!(s.iter().all(|x| (0.0..=1.0).contains(x)));
        prop_assert_eq!(s[n - 1], 1.0);
    }
}
