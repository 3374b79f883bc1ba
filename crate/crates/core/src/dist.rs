//! Valid value distributions: exact CDF / quantile access, sampling, tail
//! expectations, and expected order statistics.
//!
//! Every built-in family reduces internally to a piecewise-linear quantile
//! function (atoms are flat pieces, support gaps are jumps), so means,
//! variances, tail expectations, and `E[max of n draws]` all evaluate in
//! closed form. A distribution is *valid* when its support is nonnegative
//! and bounded and its variance is strictly positive.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// Base-value probability of 1 in the adversarial family, fixed to 2 - sqrt(2).
pub const ADVERSARIAL_Q: f64 = 2.0 - std::f64::consts::SQRT_2;

/// Serializable description of a distribution: family tag plus parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum DistributionDesc {
    /// Uniform on [lo, hi].
    UniformInterval { lo: f64, hi: f64 },
    /// Bernoulli(p) base value plus Unif[0, delta] noise.
    BernoulliPlusNoise { p: f64, delta: f64 },
    /// Three-point base value {0, 1, (1-q)/p} with masses {1-q-p, q, p},
    /// q = 2 - sqrt(2), plus Unif[0, delta] noise.
    Adversarial { p: f64, delta: f64 },
    /// Arbitrary CDF given as (x, F(x)) breakpoints; repeated x encodes an
    /// atom, a flat stretch of F encodes a support gap.
    PiecewiseLinearCdf { points: Vec<(f64, f64)> },
}

/// One linear piece of the quantile function: for u in (q0, q1],
/// F^{-1}(u) interpolates from x0 to x1. An atom has x0 == x1.
#[derive(Clone, Copy, Debug)]
struct Seg {
    q0: f64,
    q1: f64,
    x0: f64,
    x1: f64,
}

impl Seg {
    fn is_atom(&self) -> bool {
        self.x0 == self.x1
    }

    fn value_at(&self, q: f64) -> f64 {
        if self.is_atom() || self.q1 == self.q0 {
            self.x0
        } else {
            self.x0 + (self.x1 - self.x0) * (q - self.q0) / (self.q1 - self.q0)
        }
    }
}

/// A validated distribution with exact quantile-side arithmetic.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "DistributionDesc", into = "DistributionDesc")]
pub struct DistributionSpec {
    desc: DistributionDesc,
    segs: Vec<Seg>,
    lo: f64,
    hi: f64,
    mean: f64,
    variance: f64,
}

impl PartialEq for DistributionSpec {
    fn eq(&self, other: &Self) -> bool {
        self.desc == other.desc
    }
}

impl TryFrom<DistributionDesc> for DistributionSpec {
    type Error = Error;
    fn try_from(desc: DistributionDesc) -> Result<Self> {
        DistributionSpec::new(desc)
    }
}

impl From<DistributionSpec> for DistributionDesc {
    fn from(d: DistributionSpec) -> Self {
        d.desc
    }
}

impl DistributionSpec {
    /// Validate a description and compile its quantile representation.
    pub fn new(desc: DistributionDesc) -> Result<Self> {
        let segs = match &desc {
            DistributionDesc::UniformInterval { lo, hi } => {
                if !lo.is_finite() || !hi.is_finite() || *lo < 0.0 || hi <= lo {
                    return Err(Error::InvalidDistribution(format!(
                        "uniform-interval requires 0 <= lo < hi, got [{lo}, {hi}]"
                    )));
                }
                vec![Seg { q0: 0.0, q1: 1.0, x0: *lo, x1: *hi }]
            }
            DistributionDesc::BernoulliPlusNoise { p, delta } => {
                if !(*p > 0.0 && *p < 1.0) {
                    return Err(Error::InvalidDistribution(format!(
                        "bernoulli-plus-noise requires p in (0,1), got {p}"
                    )));
                }
                if !(*delta >= 0.0 && *delta <= 1.0) {
                    return Err(Error::InvalidDistribution(format!(
                        "bernoulli-plus-noise requires delta in [0,1], got {delta}"
                    )));
                }
                vec![
                    Seg { q0: 0.0, q1: 1.0 - p, x0: 0.0, x1: *delta },
                    Seg { q0: 1.0 - p, q1: 1.0, x0: 1.0, x1: 1.0 + delta },
                ]
            }
            DistributionDesc::Adversarial { p, delta } => {
                let q = ADVERSARIAL_Q;
                if !(*p > 0.0 && *p < 1.0 - q) {
                    return Err(Error::InvalidDistribution(format!(
                        "adversarial requires 0 < p < 1 - q = {:.6}, got {p}",
                        1.0 - q
                    )));
                }
                let high = (1.0 - q) / p;
                if !(*delta >= 0.0 && *delta <= 1.0 && 1.0 + delta <= high) {
                    return Err(Error::InvalidDistribution(format!(
                        "adversarial noise delta = {delta} must satisfy 0 <= delta <= 1 \
                         and 1 + delta <= (1-q)/p = {high:.6}"
                    )));
                }
                vec![
                    Seg { q0: 0.0, q1: 1.0 - q - p, x0: 0.0, x1: *delta },
                    Seg { q0: 1.0 - q - p, q1: 1.0 - p, x0: 1.0, x1: 1.0 + delta },
                    Seg { q0: 1.0 - p, q1: 1.0, x0: high, x1: high + delta },
                ]
            }
            DistributionDesc::PiecewiseLinearCdf { points } => compile_piecewise(points)?,
        };
        let lo = segs.first().map(|s| s.x0).unwrap_or(0.0);
        let hi = segs.last().map(|s| s.x1).unwrap_or(0.0);
        let mean: f64 = segs.iter().map(|s| (s.q1 - s.q0) * (s.x0 + s.x1) / 2.0).sum();
        let second: f64 = segs
            .iter()
            .map(|s| (s.q1 - s.q0) * (s.x0 * s.x0 + s.x0 * s.x1 + s.x1 * s.x1) / 3.0)
            .sum();
        let variance = (second - mean * mean).max(0.0);
        if variance <= 0.0 {
            return Err(Error::InvalidDistribution(
                "distribution has zero variance".to_string(),
            ));
        }
        Ok(DistributionSpec { desc, segs, lo, hi, mean, variance })
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        Self::new(DistributionDesc::UniformInterval { lo, hi })
    }

    pub fn bernoulli_plus_noise(p: f64, delta: f64) -> Result<Self> {
        Self::new(DistributionDesc::BernoulliPlusNoise { p, delta })
    }

    pub fn adversarial(p: f64, delta: f64) -> Result<Self> {
        Self::new(DistributionDesc::Adversarial { p, delta })
    }

    pub fn piecewise_linear_cdf(points: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(DistributionDesc::PiecewiseLinearCdf { points })
    }

    pub fn desc(&self) -> &DistributionDesc {
        &self.desc
    }

    /// Support bounds [lo, hi].
    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// True when the distribution has no atoms (CDF continuous in x).
    pub fn is_continuous(&self) -> bool {
        self.segs.iter().all(|s| !s.is_atom())
    }

    /// True when the support is a single interval with no atoms, i.e. the
    /// density exists and is positive exactly on [lo, hi].
    pub fn has_interval_support(&self) -> bool {
        self.is_continuous()
            && self.segs.windows(2).all(|w| w[0].x1 == w[1].x0)
    }

    /// Value-space locations where the CDF has a kink, jump, or endpoint.
    pub fn value_breakpoints(&self) -> Vec<f64> {
        let mut pts = Vec::with_capacity(2 * self.segs.len());
        for s in &self.segs {
            pts.push(s.x0);
            pts.push(s.x1);
        }
        pts.dedup();
        pts
    }

    /// Right-continuous CDF, P(X <= x).
    pub fn cdf(&self, x: f64) -> f64 {
        if x < self.lo {
            return 0.0;
        }
        let mut acc = 0.0;
        for s in &self.segs {
            if x >= s.x1 {
                acc = s.q1;
            } else if x > s.x0 {
                return s.q0 + (s.q1 - s.q0) * (x - s.x0) / (s.x1 - s.x0);
            } else {
                break;
            }
        }
        acc
    }

    /// Generalized inverse CDF, inf{x : F(x) >= q}, with F^{-1}(0) = lo.
    pub fn inverse_cdf(&self, q: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidArgument(format!(
                "quantile must lie in [0,1], got {q}"
            )));
        }
        if q == 0.0 {
            return Ok(self.lo);
        }
        for s in &self.segs {
            if q <= s.q1 {
                return Ok(s.value_at(q.max(s.q0)));
            }
        }
        Ok(self.hi)
    }

    /// Inverse-transform sample; the draw always lies in [lo, hi].
    pub fn sample(&self, rng: &mut RandomStream) -> f64 {
        let u = rng.next_f64();
        self.inverse_cdf(u).expect("u in [0,1)")
    }

    /// Fill a slice with i.i.d. samples.
    pub fn sample_into(&self, rng: &mut RandomStream, out: &mut [f64]) {
        for v in out.iter_mut() {
            *v = self.sample(rng);
        }
    }

    /// Exact integral of the quantile function over [a, b] in quantile space.
    pub fn quantile_integral(&self, a: f64, b: f64) -> f64 {
        let mut total = 0.0;
        for s in &self.segs {
            let c = a.max(s.q0);
            let d = b.min(s.q1);
            if d > c {
                total += (d - c) * (s.value_at(c) + s.value_at(d)) / 2.0;
            }
        }
        total
    }

    /// E[X | X >= F^{-1}(tau)], taken over exactly the top 1 - tau quantile
    /// mass so atoms split correctly. At tau = 0 this is the mean.
    pub fn tail_expectation(&self, tau: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&tau) {
            return Err(Error::InvalidArgument(format!(
                "tail_expectation needs tau in [0,1), got {tau}"
            )));
        }
        Ok(self.quantile_integral(tau, 1.0) / (1.0 - tau))
    }

    /// E[X | X < F^{-1}(tau)] over the bottom tau quantile mass, tau in (0,1].
    pub fn lower_tail_expectation(&self, tau: f64) -> Result<f64> {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "lower_tail_expectation needs tau in (0,1], got {tau}"
            )));
        }
        Ok(self.quantile_integral(0.0, tau) / tau)
    }

    /// E[max of n i.i.d. draws], exact: integral of F^{-1}(u) d(u^n).
    pub fn expected_max(&self, n: u32) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidArgument("expected_max needs n >= 1".into()));
        }
        let k = n as i32;
        let mut total = 0.0;
        for s in &self.segs {
            // On the segment F^{-1}(u) = a + b*u.
            let (a, b) = if s.is_atom() {
                (s.x0, 0.0)
            } else {
                let slope = (s.x1 - s.x0) / (s.q1 - s.q0);
                (s.x0 - slope * s.q0, slope)
            };
            total += a * (s.q1.powi(k) - s.q0.powi(k));
            total += b * n as f64 / (n as f64 + 1.0) * (s.q1.powi(k + 1) - s.q0.powi(k + 1));
        }
        Ok(total)
    }

    /// E[max(X, c)], exact via the split at F(c).
    pub fn expected_max_with_floor(&self, c: f64) -> f64 {
        let qc = self.cdf(c);
        c * qc + self.quantile_integral(qc, 1.0)
    }

    /// Some(c) when `other` is distributed exactly as c times self, judged
    /// on the compiled quantile representation.
    pub fn scale_relation(&self, other: &Self) -> Option<f64> {
        if self.segs.len() != other.segs.len() {
            return None;
        }
        let c = other.mean / self.mean;
        if !c.is_finite() || c <= 0.0 {
            return None;
        }
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));
        for (sa, sb) in self.segs.iter().zip(&other.segs) {
            if !(close(sa.q0, sb.q0)
                && close(sa.q1, sb.q1)
                && close(c * sa.x0, sb.x0)
                && close(c * sa.x1, sb.x1))
            {
                return None;
            }
        }
        Some(c)
    }
}

fn compile_piecewise(points: &[(f64, f64)]) -> Result<Vec<Seg>> {
    if points.len() < 2 {
        return Err(Error::InvalidDistribution(
            "piecewise-linear-cdf needs at least two (x, F) points".into(),
        ));
    }
    for w in points.windows(2) {
        let ((x0, f0), (x1, f1)) = (w[0], w[1]);
        if x1 < x0 || f1 < f0 {
            return Err(Error::InvalidDistribution(format!(
                "piecewise-linear-cdf points must be nondecreasing, got ({x0},{f0}) then ({x1},{f1})"
            )));
        }
    }
    let (x_first, f_first) = points[0];
    let (_, f_last) = *points.last().unwrap();
    if x_first < 0.0 || !x_first.is_finite() {
        return Err(Error::InvalidDistribution(
            "piecewise-linear-cdf support must be nonnegative and bounded".into(),
        ));
    }
    if f_first != 0.0 || (f_last - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!(
            "piecewise-linear-cdf must start at F = 0 and end at F = 1, got {f_first} .. {f_last}"
        )));
    }
    if points.iter().any(|(x, f)| !x.is_finite() || !f.is_finite()) {
        return Err(Error::InvalidDistribution(
            "piecewise-linear-cdf points must be finite".into(),
        ));
    }
    let mut segs = Vec::new();
    for w in points.windows(2) {
        let ((x0, f0), (x1, f1)) = (w[0], w[1]);
        if f1 > f0 {
            segs.push(Seg { q0: f0, q1: f1, x0, x1 });
        }
        // f1 == f0 with x1 > x0 is a support gap: no segment.
    }
    if segs.is_empty() {
        return Err(Error::InvalidDistribution(
            "piecewise-linear-cdf carries no probability mass".into(),
        ));
    }
    // Snap the final quantile to exactly 1 so downstream integrals close.
    segs.last_mut().unwrap().q1 = 1.0;
    Ok(segs)
}
