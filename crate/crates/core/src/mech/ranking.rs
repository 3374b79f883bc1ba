//! Ordinal ranking mechanisms: per-item best rank wins, plus the weighted
//! variant that maps ranks to virtual values through per-agent quantiles.

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::mech::{Allocation, ValuationMatrix};

/// Rank of each item in an agent's bid vector: 1 is the favorite; equal bids
/// are ordered by lowest item index.
pub fn ranks_of_bids(bids: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..bids.len()).collect();
    order.sort_by(|&a, &b| bids[b].partial_cmp(&bids[a]).unwrap().then(a.cmp(&b)));
    let mut rank = vec![0usize; bids.len()];
    for (pos, &j) in order.iter().enumerate() {
        rank[j] = pos + 1;
    }
    rank
}

/// Ranking mechanism: each item goes to the agent giving it the best
/// (smallest) rank; rank ties go to the smallest agent index.
pub fn run_ranking(bids: &ValuationMatrix) -> Result<Allocation> {
    let ranks: Vec<Vec<usize>> = (0..bids.n()).map(|i| ranks_of_bids(bids.row(i))).collect();
    let mut owner = vec![0usize; bids.m()];
    for j in 0..bids.m() {
        let mut best_agent = 0usize;
        for i in 1..bids.n() {
            if ranks[i][j] < ranks[best_agent][j] {
                best_agent = i;
            }
        }
        owner[j] = best_agent;
    }
    Allocation::new(bids.n(), owner)
}

/// Virtual value an agent's rank implies: F^{-1}(1 - rank / (m + 1)).
pub fn virtual_value(dist: &DistributionSpec, rank: usize, m: usize) -> Result<f64> {
    if rank == 0 || rank > m {
        return Err(Error::InvalidArgument(format!(
            "rank must lie in 1..=m, got {rank} with m = {m}"
        )));
    }
    dist.inverse_cdf(1.0 - rank as f64 / (m as f64 + 1.0))
}

/// Weighted ranking: item j goes to the agent maximizing
/// w_i * F_i^{-1}(1 - rank_i(j) / (m+1)); ties go to the smallest index.
pub fn run_weighted_ranking(
    bids: &ValuationMatrix,
    dists: &[DistributionSpec],
    weights: &[f64],
) -> Result<Allocation> {
    let n = bids.n();
    if dists.len() != n || weights.len() != n {
        return Err(Error::InvalidMechanism(format!(
            "weighted ranking needs one distribution and one weight per agent \
             (n = {n}, got {} dists, {} weights)",
            dists.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
        return Err(Error::InvalidMechanism("weights must be positive".into()));
    }
    let m = bids.m();
    let ranks: Vec<Vec<usize>> = (0..n).map(|i| ranks_of_bids(bids.row(i))).collect();
    // Virtual values depend only on the rank, so precompute per agent.
    let mut table = vec![vec![0.0; m + 1]; n];
    for i in 0..n {
        for rank in 1..=m {
            table[i][rank] = weights[i] * virtual_value(&dists[i], rank, m)?;
        }
    }
    let mut owner = vec![0usize; m];
    for j in 0..m {
        let mut best = 0usize;
        let mut best_score = table[0][ranks[0][j]];
        for i in 1..n {
            let score = table[i][ranks[i][j]];
            if score > best_score {
                best_score = score;
                best = i;
            }
        }
        owner[j] = best;
    }
    Allocation::new(n, owner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomStream;

    fn v(rows: &[Vec<f64>]) -> ValuationMatrix {
        ValuationMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn ranking_examples() {
        let a = run_ranking(&v(&[vec![0.9, 0.1], vec![0.2, 0.8]])).unwrap();
        assert_eq!(a.owners(), &[0, 1]);

        // Both agents rank item 0 first; agent 0 wins both items.
        let a = run_ranking(&v(&[vec![0.9, 0.1], vec![0.8, 0.2]])).unwrap();
        assert_eq!(a.owners(), &[0, 0]);

        let a = run_ranking(&v(&[vec![0.3, 0.7, 0.1]])).unwrap();
        assert_eq!(a.owners(), &[0, 0, 0]);
    }

    #[test]
    fn ranking_is_rank_invariant() {
        let mut rng = RandomStream::new(5, 0);
        let d = crate::dist::DistributionSpec::uniform(0.0, 1.0).unwrap();
        for _ in 0..200 {
            let bids = ValuationMatrix::sample_iid(&d, 3, 7, &mut rng);
            let base = run_ranking(&bids).unwrap();
            // Strictly increasing transform of one agent's bids.
            let agent = (rng.next_f64() * 3.0) as usize;
            let row: Vec<f64> = bids.row(agent).iter().map(|x| 0.2 + x * x * 3.0).collect();
            let transformed = bids.with_row(agent, &row).unwrap();
            let after = run_ranking(&transformed).unwrap();
            assert_eq!(base.owners(), after.owners());
        }
    }

    #[test]
    fn virtual_value_formula() {
        let d = crate::dist::DistributionSpec::uniform(0.0, 1.0).unwrap();
        assert!((virtual_value(&d, 1, 3).unwrap() - 0.75).abs() < 1e-12);
        assert!(virtual_value(&d, 0, 3).is_err());
        assert!(virtual_value(&d, 4, 3).is_err());
    }

    #[test]
    fn weighted_ranking_with_unit_weights_matches_ranking() {
        let d = crate::dist::DistributionSpec::uniform(0.0, 1.0).unwrap();
        let mut rng = RandomStream::new(6, 0);
        for _ in 0..100 {
            let bids = ValuationMatrix::sample_iid(&d, 3, 6, &mut rng);
            let plain = run_ranking(&bids).unwrap();
            let weighted =
                run_weighted_ranking(&bids, &[d.clone(), d.clone(), d.clone()], &[1.0, 1.0, 1.0])
                    .unwrap();
            assert_eq!(plain.owners(), weighted.owners());
        }
    }

    #[test]
    fn weighted_ranking_scale_tie_goes_to_first_agent() {
        // U[0,1] vs U[0,2] with weights (2,1): at m = 1 both virtual values
        // are 2 * 0.5 = 1 * 1.0, so agent 0 wins the tie.
        let d1 = crate::dist::DistributionSpec::uniform(0.0, 1.0).unwrap();
        let d2 = crate::dist::DistributionSpec::uniform(0.0, 2.0).unwrap();
        let a = run_weighted_ranking(&v(&[vec![0.4], vec![1.9]]), &[d1, d2], &[2.0, 1.0]).unwrap();
        assert_eq!(a.owners(), &[0]);
    }

    #[test]
    fn weighted_ranking_validates_dimensions() {
        let d = crate::dist::DistributionSpec::uniform(0.0, 1.0).unwrap();
        let bids = v(&[vec![0.4], vec![0.6]]);
        assert!(run_weighted_ranking(&bids, std::slice::from_ref(&d), &[1.0, 1.0]).is_err());
        assert!(run_weighted_ranking(&bids, &[d.clone(), d.clone()], &[1.0]).is_err());
        assert!(run_weighted_ranking(&bids, &[d.clone(), d], &[1.0, -1.0]).is_err());
    }
}
