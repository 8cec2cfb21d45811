//! Isolation radii and the `(δ, s)`-supported census.
//!
//! A point `w` with isolation radius `ρ` is `(δ, s)`-supported when every ball
//! of radius `δρ` leaves at least `s` points of `B = C ∩ Ball(w, ρ/δ)` outside.
//! Both modes below compute a lower bound on `inf_p |B \ Ball(p, δρ)|`, so a
//! reported "supported" is always genuine.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

use super::spatial::{distance, PointGrid};

/// Relative slack making the closed-ball tests robust to rounding.
const CLOSED: f64 = 1e-9;

/// Work guard for the exact mode: grid points times ball members.
const EXACT_WORK_LIMIT: usize = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportMode {
    /// Test balls of radius `2δρ` centred at the points of `B`.
    ///
    /// Any ball of radius `δρ` meeting `B` at `x` lies inside `Ball(x, 2δρ)`.
    Candidate,
    /// Test balls of radius `δρ + h√d/2` centred on a grid of pitch `h = δρ/4`
    /// covering every centre whose ball can meet `B`.
    Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportedCensus {
    pub delta: f64,
    pub s_values: Vec<usize>,
    /// Number of `(δ, s)`-supported points for each entry of `s_values`.
    pub counts: Vec<usize>,
    pub n: usize,
    pub mode: SupportMode,
    /// `counts[i] · s_i / n`.
    pub normalized: Vec<f64>,
    /// `max_i counts[i] · s_i / n`, an empirical stand-in for the constant `c(δ, d)`.
    pub c_hat: f64,
    /// Smallest entry of `normalized`.
    pub normalized_min: f64,
}

fn check_points(points: &[Vec<f64>]) -> Result<()> {
    if points.len() < 2 {
        return Err(invalid("isolation radius needs at least 2 points"));
    }
    let d = points[0].len();
    if d == 0 {
        return Err(invalid("points must have at least one coordinate"));
    }
    for (i, p) in points.iter().enumerate() {
        if p.len() != d {
            return Err(invalid(format!("points[{i}] has {} coordinates, expected {d}", p.len())));
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(invalid(format!("points[{i}] has a non-finite coordinate")));
        }
    }
    Ok(())
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("delta must lie in (0, 1), got {delta}")))
    }
}

fn rho_of(grid: &PointGrid, w: usize) -> Result<f64> {
    let rho = grid.nearest_other(w).expect("at least two points");
    if rho > 0.0 {
        Ok(rho)
    } else {
        Err(invalid(format!("point {w} coincides with another point")))
    }
}

/// `min_{v ≠ w} |v − w|`.
pub fn isolation_radius(points: &[Vec<f64>], w: usize) -> Result<f64> {
    check_points(points)?;
    if w >= points.len() {
        return Err(invalid(format!("point index {w} out of range")));
    }
    rho_of(&PointGrid::new(points), w)
}

fn level_in(points: &[Vec<f64>], grid: &PointGrid, w: usize, delta: f64, mode: SupportMode) -> Result<usize> {
    let rho = rho_of(grid, w)?;
    let big = rho / delta;
    let members = grid.within(&points[w], big * (1.0 + CLOSED));
    let cap = members.len();
    let outside = |c: &[f64], r: f64| -> usize {
        let r = r * (1.0 + CLOSED);
        members.iter().filter(|&&i| distance(&points[i], c) > r).count()
    };
    let level = match mode {
        SupportMode::Candidate => members.iter().map(|&x| outside(&points[x], 2.0 * delta * rho)).min().unwrap_or(cap),
        SupportMode::Exact => {
            let d = points[w].len();
            let h = delta * rho / 4.0;
            let radius = delta * rho + h * (d as f64).sqrt() / 2.0;
            let k = ((big + delta * rho) / h).ceil() as i64;
            let side = (2 * k + 1) as usize;
            let total = side
                .checked_pow(d as u32)
                .filter(|t| t.saturating_mul(cap.max(1)) <= EXACT_WORK_LIMIT)
                .ok_or(Error::LimitExceeded {
                    what: "exact-mode grid work",
                    limit: EXACT_WORK_LIMIT,
                    actual: usize::MAX,
                })?;
            let mut best = cap;
            let mut c = vec![0.0; d];
            for code in 0..total {
                let mut rem = code;
                for (i, slot) in c.iter_mut().enumerate() {
                    let off = (rem % side) as i64 - k;
                    rem /= side;
                    *slot = points[w][i] + off as f64 * h;
                }
                best = best.min(outside(&c, radius));
                if best == 0 {
                    break;
                }
            }
            best
        }
    };
    Ok(level.min(cap))
}

/// Largest `s` for which `w` is `(δ, s)`-supported under `mode`, i.e. the
/// (lower bound on the) infimum count described in the module docs.
pub fn support_level(points: &[Vec<f64>], w: usize, delta: f64, mode: SupportMode) -> Result<usize> {
    check_points(points)?;
    check_delta(delta)?;
    if w >= points.len() {
        return Err(invalid(format!("point index {w} out of range")));
    }
    level_in(points, &PointGrid::new(points), w, delta, mode)
}

pub fn is_supported(points: &[Vec<f64>], w: usize, delta: f64, s: usize, mode: SupportMode) -> Result<bool> {
    if s < 2 {
        return Err(invalid("s must be at least 2"));
    }
    Ok(support_level(points, w, delta, mode)? >= s)
}

/// Counts `(δ, s)`-supported points for each `s`, in parallel over points.
pub fn supported_census(points: &[Vec<f64>], delta: f64, s_values: &[usize], mode: SupportMode) -> Result<SupportedCensus> {
    check_points(points)?;
    check_delta(delta)?;
    if s_values.is_empty() || s_values[0] < 2 || s_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("s_values must be a nonempty increasing list of integers >= 2"));
    }
    let grid = PointGrid::new(points);
    let levels: Vec<usize> = (0..points.len())
        .into_par_iter()
        .map(|w| level_in(points, &grid, w, delta, mode))
        .collect::<Result<_>>()?;
    let n = points.len();
    let counts: Vec<usize> = s_values.iter().map(|&s| levels.iter().filter(|&&l| l >= s).count()).collect();
    let normalized: Vec<f64> = counts.iter().zip(s_values).map(|(&c, &s)| (c * s) as f64 / n as f64).collect();
    Ok(SupportedCensus {
        delta,
        s_values: s_values.to_vec(),
        c_hat: normalized.iter().copied().fold(0.0, f64::max),
        normalized_min: normalized.iter().copied().fold(f64::INFINITY, f64::min),
        normalized,
        counts,
        n,
        mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn isolation_radius_examples() {
        let pts = vec![vec![0.0, 0.0], vec![3.0, 4.0]];
        assert_eq!(isolation_radius(&pts, 0).unwrap(), 5.0);
        let grid: Vec<Vec<f64>> = (0..25).map(|i| vec![(i % 5) as f64, (i / 5) as f64]).collect();
        assert_eq!(isolation_radius(&grid, 12).unwrap(), 1.0);
        assert!(isolation_radius(&pts[..1], 0).is_err());
    }

    #[test]
    fn isolation_radius_matches_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<Vec<f64>> = (0..100).map(|_| vec![rng.random_range(0.0..10.0), rng.random_range(0.0..10.0)]).collect();
        for w in 0..pts.len() {
            let scan = (0..pts.len()).filter(|&v| v != w).map(|v| distance(&pts[v], &pts[w])).fold(f64::INFINITY, f64::min);
            assert_eq!(isolation_radius(&pts, w).unwrap(), scan);
        }
    }

    #[test]
    fn two_points_are_never_supported() {
        let pts = vec![vec![0.0], vec![1.0]];
        for mode in [SupportMode::Candidate, SupportMode::Exact] {
            assert!(!is_supported(&pts, 0, 0.5, 2, mode).unwrap());
        }
        let c = supported_census(&pts, 0.5, &[2], SupportMode::Candidate).unwrap();
        assert_eq!(c.counts, vec![0]);
    }

    /// `w` at the origin, one point at distance 1 fixing `ρ = 1`, and 200
    /// points spread through the annulus `1 ≤ |x| < 2 = ρ/δ`.
    fn annulus_cloud() -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut pts = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
        while pts.len() < 202 {
            let (x, y): (f64, f64) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let r = (x * x + y * y).sqrt();
            if (1.05..1.95).contains(&r) && pts.iter().all(|p| distance(p, &[x, y]) > 0.05) {
                pts.push(vec![x, y]);
            }
        }
        pts
    }

    #[test]
    fn dense_annulus_supports_centre() {
        let pts = annulus_cloud();
        assert!(is_supported(&pts, 0, 0.5, 7, SupportMode::Candidate).unwrap());
        assert!(is_supported(&pts, 0, 0.5, 7, SupportMode::Exact).unwrap());
        // The candidate bound is weaker than the exact-mode bound only by the factor-2 radius.
        let cand = support_level(&pts, 0, 0.5, SupportMode::Candidate).unwrap();
        let exact = support_level(&pts, 0, 0.5, SupportMode::Exact).unwrap();
        assert!(cand <= 203 && exact <= 203);
    }

    #[test]
    fn sparse_big_ball_is_not_supported() {
        // Ball(w, ρ/δ) holds only 3 points, so no s >= 4 can be reached.
        let pts = vec![vec![0.0], vec![1.0], vec![-1.5], vec![10.0]];
        assert!(!is_supported(&pts, 0, 0.5, 4, SupportMode::Exact).unwrap());
        assert!(support_level(&pts, 0, 0.5, SupportMode::Candidate).unwrap() <= 3);
    }

    #[test]
    fn census_counts_decrease_in_s() {
        let pts = annulus_cloud();
        let c = supported_census(&pts, 0.5, &[2, 3, 5, 8, 13, 21], SupportMode::Candidate).unwrap();
        assert!(c.counts.windows(2).all(|w| w[0] >= w[1]));
        assert!(c.counts.iter().all(|&k| k <= c.n));
        assert!(supported_census(&pts, 1.5, &[2], SupportMode::Candidate).is_err());
        assert!(supported_census(&pts, 0.5, &[3, 2], SupportMode::Candidate).is_err());
    }

    #[test]
    fn invariant_under_similarity() {
        let pts = annulus_cloud();
        let (c, s) = (0.6f64.cos(), 0.6f64.sin());
        let moved: Vec<Vec<f64>> = pts.iter().map(|p| vec![3.0 * (c * p[0] - s * p[1]) + 7.0, 3.0 * (s * p[0] + c * p[1]) - 2.0]).collect();
        for w in [0, 5, 50] {
            assert_eq!(
                support_level(&pts, w, 0.5, SupportMode::Candidate).unwrap(),
                support_level(&moved, w, 0.5, SupportMode::Candidate).unwrap()
            );
        }
    }
}
