use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// An isoperimetric profile `g`, defined on positive integers and extended to
/// reals by `g(x) = g(max(⌊x⌋, 1))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Profile {
    Constant { value: f64 },
    /// `coef · n^exponent`.
    Power { coef: f64, exponent: f64 },
    /// Step function through `(n_i, g_i)` with strictly increasing `n_i`:
    /// `g(n) = g_i` for the largest `n_i ≤ n`, and `g_0` below `n_0`.
    Table { points: Vec<(u64, f64)> },
}

impl Profile {
    pub fn constant(value: f64) -> Self {
        Profile::Constant { value }
    }

    pub fn power(coef: f64, exponent: f64) -> Self {
        Profile::Power { coef, exponent }
    }

    pub fn table(points: Vec<(u64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(invalid("profile table is empty"));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(invalid("profile table arguments must be strictly increasing"));
        }
        Ok(Profile::Table { points })
    }

    /// Step profile through the hull data `g(n_k) = |∂W_k|`.
    ///
    /// Repeated sizes keep their first entry.
    pub fn from_pairs(sizes: &[usize], values: &[usize]) -> Result<Self> {
        let mut points: Vec<(u64, f64)> = Vec::with_capacity(sizes.len());
        for (&n, &b) in sizes.iter().zip(values) {
            if points.last().is_none_or(|&(last, _)| (n as u64) > last) {
                points.push((n as u64, b as f64));
            }
        }
        Self::table(points)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = if x >= 1.0 { x.floor() } else { 1.0 };
        match self {
            Profile::Constant { value } => *value,
            Profile::Power { coef, exponent } => coef * n.powf(*exponent),
            Profile::Table { points } => {
                let idx = points.partition_point(|&(ni, _)| (ni as f64) <= n);
                points[idx.saturating_sub(1)].1
            }
        }
    }

    /// Checks `g(n) > 0` for the given arguments, naming the first failure.
    pub(crate) fn check_positive(&self, args: impl IntoIterator<Item = usize>) -> Result<()> {
        for n in args {
            let v = self.eval(n as f64);
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("profile value g({n}) = {v} must be positive and finite")));
            }
        }
        Ok(())
    }
}

/// The largest nondecreasing profile below the samples at sampled sizes:
/// `g(n) = min { b_i : n_i ≥ n }`, constant beyond the largest sampled size.
pub fn lower_envelope(samples: &[(usize, f64)]) -> Result<Profile> {
    if samples.is_empty() {
        return Err(invalid("lower envelope of an empty sample"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    // Suffix minima S_i at each distinct sampled size n_i.
    let mut suffix: Vec<(u64, f64)> = Vec::new();
    let mut running = f64::INFINITY;
    for &(n, b) in sorted.iter().rev() {
        running = running.min(b);
        match suffix.last_mut() {
            Some(last) if last.0 == n as u64 => last.1 = running,
            _ => suffix.push((n as u64, running)),
        }
    }
    suffix.reverse();
    // g = S_i on (n_{i-1}, n_i], written as steps starting at n_{i-1} + 1.
    let mut points = vec![(1, suffix[0].1)];
    for w in suffix.windows(2) {
        points.push((w[0].0 + 1, w[1].1));
    }
    points.dedup_by(|b, a| a.0 == b.0);
    Profile::table(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_extension() {
        let g = Profile::table(vec![(1, 1.0), (5, 4.0), (13, 8.0)]).unwrap();
        assert_eq!(g.eval(0.3), 1.0);
        assert_eq!(g.eval(4.99), 1.0);
        assert_eq!(g.eval(5.0), 4.0);
        assert_eq!(g.eval(100.0), 8.0);
        assert_eq!(Profile::power(2.0, 0.5).eval(9.7), 6.0);
        assert!(Profile::table(vec![(2, 1.0), (2, 3.0)]).is_err());
    }

    #[test]
    fn envelope_is_monotone_and_below() {
        let samples = vec![(1, 4.0), (5, 8.0), (13, 6.0), (25, 12.0), (41, 3.0)];
        let g = lower_envelope(&samples).unwrap();
        let mut prev = 0.0;
        for n in 1..60 {
            let v = g.eval(n as f64);
            assert!(v >= prev);
            prev = v;
        }
        for &(n, b) in &samples {
            assert!(g.eval(n as f64) <= b);
        }
        assert_eq!(g.eval(2.0), 3.0);

        let h = lower_envelope(&[(3, 2.0), (7, 5.0), (9, 9.0)]).unwrap();
        let expect = [2.0, 2.0, 2.0, 5.0, 5.0, 5.0, 5.0, 9.0, 9.0, 9.0];
        for (n, &e) in (1..=10).zip(&expect) {
            assert_eq!(h.eval(n as f64), e, "n = {n}");
        }
    }
}
