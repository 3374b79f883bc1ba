//! Coupling of the quota serial dictatorship with its quantile-threshold
//! twin on shared draws.

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::mech::{run_pick_r, run_qt_s, ValuationMatrix};
use crate::rng::RandomStream;

/// Thresholds that make the quantile rule allocate each item to agent i
/// with probability exactly r_i: s_i = r_i / (1 - sum_{k<i} r_k).
pub fn matched_thresholds(r: &[f64]) -> Result<Vec<f64>> {
    if r.is_empty() {
        return Err(Error::InvalidArgument("empty share vector".into()));
    }
    let mut s = Vec::with_capacity(r.len());
    let mut taken = 0.0;
    for (i, &ri) in r.iter().enumerate() {
        let remaining = 1.0 - taken;
        let si = if i + 1 == r.len() || remaining <= 1e-12 {
            1.0
        } else {
            (ri / remaining).clamp(0.0, 1.0)
        };
        s.push(si);
        taken += ri;
    }
    Ok(s)
}

/// Count the items owned differently by Pick-r and QT-s (with the matched
/// thresholds) on one shared sample of values.
pub fn coupling_divergence(
    r: &[f64],
    dist: &DistributionSpec,
    m: usize,
    seed: u64,
) -> Result<usize> {
    let mut rng = RandomStream::new(seed, 0);
    let values = ValuationMatrix::sample_iid(dist, r.len(), m, &mut rng);
    let pick = run_pick_r(r, &values)?;
    let s = matched_thresholds(r)?;
    let qt = run_qt_s(&s, dist, &values)?;
    Ok((0..m).filter(|&j| pick.owner(j) != qt.owner(j)).count())
}
