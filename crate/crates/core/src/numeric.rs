//! Quadrature, root finding, and the small statistics kit used by reports.

use crate::error::{Error, Result};

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
///
/// The integrand must be finite on `[a, b]`. Kinks are handled by refinement;
/// callers that know breakpoint locations should prefer
/// [`integrate_with_breakpoints`].
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 52)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Integrate `f` over `[a, b]`, splitting first at the given breakpoints
/// (kinks, atom locations) so each adaptive pass sees a smooth piece.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> f64 {
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|x| x.is_finite() && *x > a && *x < b)
        .collect();
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    cuts.dedup();
    let mut total = 0.0;
    let mut lo = a;
    let pieces = cuts.len() + 1;
    let piece_tol = tol / pieces as f64;
    for cut in cuts.into_iter().chain(std::iter::once(b)) {
        total += adaptive_simpson(f, lo, cut, piece_tol);
        lo = cut;
    }
    total
}

/// Bisection on a bracketing interval; `f(lo)` and `f(hi)` must have
/// opposite signs. Returns the midpoint once the interval is below `xtol`.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, xtol: f64, max_iter: u32) -> Result<f64> {
    let mut lo = lo;
    let mut hi = hi;
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::BracketFailure(format!(
            "f({lo}) = {flo:.3e} and f({hi}) = {fhi:.3e} have the same sign"
        )));
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo < xtol {
            return Ok(mid);
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Sample mean.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample standard deviation (0 for fewer than two points).
pub fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

/// Normal-approximation 95% confidence interval for a mean.
pub fn mean_ci95(xs: &[f64]) -> (f64, f64, f64) {
    let m = mean(xs);
    let half = 1.96 * sample_sd(xs) / (xs.len() as f64).sqrt();
    (m, m - half, m + half)
}

/// Ratio-of-means estimator mean(y)/mean(x) with a delta-method 95% CI.
///
/// This is the estimator for approximation ratios: a ratio of expectations
/// over shared draws, not the expectation of per-trial ratios.
pub fn ratio_of_means_ci95(ys: &[f64], xs: &[f64]) -> (f64, f64, f64) {
    assert_eq!(ys.len(), xs.len());
    let n = xs.len() as f64;
    let my = mean(ys);
    let mx = mean(xs);
    let r = my / mx;
    if xs.len() < 2 {
        return (r, r, r);
    }
    let mut var_y = 0.0;
    let mut var_x = 0.0;
    let mut cov = 0.0;
    for (y, x) in ys.iter().zip(xs) {
        var_y += (y - my) * (y - my);
        var_x += (x - mx) * (x - mx);
        cov += (y - my) * (x - mx);
    }
    var_y /= n - 1.0;
    var_x /= n - 1.0;
    cov /= n - 1.0;
    let var_r = (var_y - 2.0 * r * cov + r * r * var_x) / (mx * mx) / n;
    let half = 1.96 * var_r.max(0.0).sqrt();
    (r, r - half, r + half)
}

/// Normal-approximation 95% CI for a Bernoulli frequency.
pub fn frequency_ci95(successes: usize, trials: usize) -> (f64, f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let half = 1.96 * (p * (1.0 - p) / n).sqrt();
    (p, (p - half).max(0.0), (p + half).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_on_cubics() {
        let f = |x: f64| 3.0 * x * x * x - x + 2.0;
        let got = adaptive_simpson(&f, 0.0, 2.0, 1e-12);
        assert!((got - (12.0 - 2.0 + 4.0)).abs() < 1e-10);
    }

    #[test]
    fn simpson_handles_kinks_with_breakpoints() {
        let f = |x: f64| (x - 0.3).abs();
        let got = integrate_with_breakpoints(&f, 0.0, 1.0, &[0.3], 1e-10);
        let exact = 0.3 * 0.3 / 2.0 + 0.7 * 0.7 / 2.0;
        assert!((got - exact).abs() < 1e-9);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let f = |x: f64| x * x - 2.0;
        let root = bisect(&f, 0.0, 2.0, 1e-12, 100).unwrap();
        assert!((root - std::f64::consts::SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn bisect_rejects_bad_bracket() {
        let f = |x: f64| x * x + 1.0;
        assert!(bisect(&f, 0.0, 1.0, 1e-9, 100).is_err());
    }

    #[test]
    fn ratio_ci_centers_on_ratio_of_means() {
        let ys = [1.0, 2.0, 3.0, 2.0];
        let xs = [2.0, 2.5, 3.5, 2.0];
        let (r, lo, hi) = ratio_of_means_ci95(&ys, &xs);
        assert!((r - 2.0 / 2.5).abs() < 1e-12);
        assert!(lo <= r && r <= hi);
    }
}
