//! Exact validators for the combinatorial and piecewise bounds used by the
//! two-agent analysis.

use crate::error::{Error, Result};
use crate::mech::TWO_AGENT_OPTIMAL_R;

/// Binomial coefficient in u128; callers keep n small enough (n <= 80 here)
/// that intermediate products stay in range.
fn binom(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    for i in 0..k {
        // Each prefix product equals C(n, i+1), so the division is exact.
        num = num * (n - i) as u128 / (i + 1) as u128;
    }
    num
}

/// E|r' - h/2| for r' ~ Bin(h, 1/2), exact.
pub fn binomial_abs_deviation(h: u32) -> f64 {
    let num: u128 = (0..=h)
        .map(|k| binom(h, k) * (2 * k as i64 - h as i64).unsigned_abs() as u128)
        .sum();
    // E = num / 2^(h+1)
    num as f64 / 2f64.powi(h as i32 + 1)
}

/// E|r - h/2| for r ~ HypGeo(2s, s, h), exact.
pub fn hypergeometric_abs_deviation(s: u32, h: u32) -> f64 {
    let num: u128 = (0..=h)
        .filter(|&r| r <= s && h - r <= s)
        .map(|r| binom(s, r) * binom(s, h - r) * (2 * r as i64 - h as i64).unsigned_abs() as u128)
        .sum();
    num as f64 / (2.0 * binom(2 * s, h) as f64)
}

/// Check, by exact integer arithmetic, that the hypergeometric mean absolute
/// deviation is dominated by the balanced binomial's, which is in turn at
/// most h/4:
///   E_{HypGeo(2s,s,h)}|r - h/2|  <=  E_{Bin(h,1/2)}|r' - h/2|  <=  h/4.
pub fn deviation_bound_check(s: u32, h: u32) -> Result<bool> {
    if h < 2 || h > 2 * s {
        return Err(Error::InvalidArgument(format!(
            "deviation_bound_check needs 2 <= h <= 2s, got s = {s}, h = {h}"
        )));
    }
    if 2 * s > 80 {
        return Err(Error::InstanceTooLarge {
            what: "deviation_bound_check exact binomials".into(),
            size: 2.0 * s as f64,
            limit: 80.0,
        });
    }
    let bin_num: u128 = (0..=h)
        .map(|k| binom(h, k) * (2 * k as i64 - h as i64).unsigned_abs() as u128)
        .sum();
    let hyp_num: u128 = (0..=h)
        .filter(|&r| r <= s && h - r <= s)
        .map(|r| binom(s, r) * binom(s, h - r) * (2 * r as i64 - h as i64).unsigned_abs() as u128)
        .sum();
    // hyp_num / (2 C(2s,h)) <= bin_num / 2^(h+1)  <=>  hyp_num 2^h <= bin_num C(2s,h)
    let first = hyp_num.checked_mul(1u128 << h).expect("fits: s <= 40")
        <= bin_num.checked_mul(binom(2 * s, h)).expect("fits: s <= 40");
    // bin_num / 2^(h+1) <= h/4  <=>  2 bin_num <= h 2^h
    let second = 2 * bin_num <= (h as u128) << h;
    Ok(first && second)
}

/// Piecewise lower envelope S(t) of the near-balanced two-agent pick rule's
/// welfare integrand, at the welfare-optimal share r = (2 - sqrt 2)/2.
pub fn envy_margin_s(t: f64) -> f64 {
    let r = TWO_AGENT_OPTIMAL_R;
    if t < 0.5 {
        (3.0 + 2.0 * r - t) / 4.0
    } else if t < 1.0 - r {
        (5.0 + 2.0 * r - 5.0 * t) / 4.0
    } else {
        7.0 * (1.0 - t) / 4.0
    }
}

/// Margin S(t) - (7/8)(1 - t^2); nonnegative on [0, 1] with equality only
/// at t = 1.
pub fn envy_margin(t: f64) -> f64 {
    envy_margin_s(t) - 7.0 / 8.0 * (1.0 - t * t)
}

/// Grid check that S(t) >= (7/8)(1 - t^2) on [0, 1], down to -1e-12 slack.
pub fn envy_margin_s_check(resolution: usize) -> Result<bool> {
    if resolution < 1000 {
        return Err(Error::InvalidArgument(format!(
            "resolution must be at least 1000, got {resolution}"
        )));
    }
    Ok((0..=resolution).all(|k| envy_margin(k as f64 / resolution as f64) >= -1e-12))
}
