use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

use super::Profile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Diverging,
    Converging,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub q: f64,
    pub n_max: usize,
    /// `(n, S(n))` with `S(n) = Σ_{j ≤ n} g(j)^{-q}`, at powers of two and at `n_max`.
    pub partial_sums: Vec<(usize, f64)>,
    /// `(S(n) − S(n/2)) / (S(n/2) − S(n/4))` at `n = n_max`.
    pub block_ratio: Option<f64>,
    pub trend: Trend,
    /// `g` decreased somewhere on `1..=n_max`.
    pub non_monotone: bool,
}

/// Block ratio above which the sum is reported as diverging.
pub const DIVERGING_RATIO: f64 = 0.95;
/// Block ratio below which the sum is reported as converging.
pub const CONVERGING_RATIO: f64 = 0.8;

/// `q = d/(d − 1)`, the exponent paired with dimension `d`.
pub fn dual_exponent(d: f64) -> f64 {
    d / (d - 1.0)
}

/// Partial sums of `Σ g(n)^{-q}` with a dyadic-block trend diagnostic.
///
/// Summing over the blocks `(n/4, n/2]` and `(n/2, n]`, a ratio near 1 or above
/// means the terms decay no faster than `1/n` (log-type or faster growth); a
/// ratio well below 1 means geometric decay of the block sums.
pub fn divergence_check(g: &Profile, n_max: usize, q: f64) -> Result<DivergenceReport> {
    if n_max == 0 {
        return Err(invalid("n_max must be at least 1"));
    }
    if !(q > 0.0 && q.is_finite()) {
        return Err(invalid("q must be positive and finite"));
    }
    let mut sums = Vec::with_capacity(n_max);
    let mut s = 0.0;
    let mut non_monotone = false;
    let mut prev = f64::NEG_INFINITY;
    for n in 1..=n_max {
        let v = g.eval(n as f64);
        if !(v > 0.0 && v.is_finite()) {
            return Err(invalid(format!("profile value g({n}) = {v} must be positive")));
        }
        non_monotone |= v < prev;
        prev = v;
        s += v.powf(-q);
        sums.push(s);
    }
    let at = |n: usize| if n == 0 { 0.0 } else { sums[n - 1] };
    let mut partial_sums: Vec<(usize, f64)> = std::iter::successors(Some(1usize), |&n| n.checked_mul(2))
        .take_while(|&n| n <= n_max)
        .map(|n| (n, at(n)))
        .collect();
    if partial_sums.last().map(|&(n, _)| n) != Some(n_max) {
        partial_sums.push((n_max, at(n_max)));
    }
    let block_ratio = (n_max >= 8).then(|| {
        let (a, b, c) = (at(n_max), at(n_max / 2), at(n_max / 4));
        (a - b) / (b - c)
    });
    let trend = match block_ratio {
        Some(r) if r > DIVERGING_RATIO => Trend::Diverging,
        Some(r) if r < CONVERGING_RATIO => Trend::Converging,
        _ => Trend::Inconclusive,
    };
    Ok(DivergenceReport {
        q,
        n_max,
        partial_sums,
        block_ratio,
        trend,
        non_monotone,
    })
}
