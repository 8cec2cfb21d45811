use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{ball, Graph};

use super::{modulus, Connector, ModulusOptions};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub radius: usize,
    /// Upper bound on `Mod_p` of paths from `o` to distance `radius + 1`.
    pub value: f64,
    pub lower_bound: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Vertices of the ball of radius `radius + 1` the problem lives on.
    pub vertices: usize,
    /// Size of the target sphere.
    pub targets: usize,
}

/// Least-squares fit of a decay model to `Mod(R)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFit {
    pub params: Vec<f64>,
    /// Residual sum of squares relative to `Σ Mod(R)²`.
    pub relative_rss: f64,
}

/// Trend tag read off `y(R) = Mod(R)^{-1/(p-1)}`, which adds in series.
///
/// With `σ` the slope of `y` against `ln R` on the first and on the last pair of
/// radii, `κ = ln(σ_last/σ_first) / ln(R_last/R_first)` (geometric midpoints).
/// A bounded `y` approached like `a − b/R` has `κ ≈ −1` and faster convergence
/// gives smaller `κ`; logarithmic or power growth gives `κ ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ParabolicTrend,
    TransientTrend,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub p: f64,
    pub root: ProbeRoot,
    pub rows: Vec<ProbeRow>,
    /// No certified increase: `lower_bound(R') ≤ value(R)` for consecutive radii.
    pub monotone: bool,
    pub strictly_decreasing: bool,
    /// `Mod(R) ≈ 1/(α + β ln R)`; params `[α, β]`.
    pub log_fit: Option<ModelFit>,
    /// `Mod(R) ≈ a + b/R`; params `[a, b]`.
    pub limit_fit: Option<ModelFit>,
    /// The fit with the smaller residual.
    pub preferred_fit: Option<FitModel>,
    /// Growth exponent of the extremal-length slope; see [`Verdict`].
    pub slope_exponent: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitModel {
    Log,
    Limit,
}

impl ProbeReport {
    /// `value(R_last) / value(R_first)`.
    pub fn decay_ratio(&self) -> Option<f64> {
        let (first, last) = (self.rows.first()?, self.rows.last()?);
        Some(last.value / first.value)
    }

    pub fn value_at(&self, radius: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.radius == radius).map(|r| r.value)
    }
}

/// Whether the root's own weight counts towards path length.
///
/// Every path from `o` passes through `o`, so with the root counted the
/// extremal length carries a fixed series term for `o` alone. Excluding it
/// yields the family of paths leaving `o`, which has the same parabolicity type
/// but shows the decay in `R` undiluted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeRoot {
    #[default]
    Included,
    Excluded,
}

/// Modulus of paths from `o` to the complement of `Ball(o, R)` for each radius.
///
/// A path leaves `Ball(o, R)` exactly when it reaches the sphere at distance
/// `R + 1`, so each problem is solved on `Ball(o, R + 1)` with that sphere as
/// target. Radii are solved in parallel.
/// With [`ProbeRoot::Excluded`] the sources are the neighbours of `o` instead.
pub fn vel_probe(g: &Graph, o: usize, radii: &[usize], opts: &ModulusOptions, root: ProbeRoot) -> Result<ProbeReport> {
    opts.check()?;
    g.check_vertex(o)?;
    if radii.is_empty() || radii[0] == 0 || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("radii must be a nonempty increasing list of positive integers"));
    }
    let ecc = g.eccentricity(o);
    if let Some(&r) = radii.iter().find(|&&r| r + 1 > ecc) {
        return Err(invalid(format!("radius {r} needs eccentricity at least {} but it is {ecc}", r + 1)));
    }
    let rows: Vec<ProbeRow> = radii
        .par_iter()
        .map(|&r| {
            let b = ball(g, o, r + 1)?;
            let depth = b.graph.bfs_distances(&[b.root]);
            let target: Vec<usize> = (0..b.graph.len()).filter(|&v| depth[v] == Some(r + 1)).collect();
            let source = match root {
                ProbeRoot::Included => vec![b.root],
                ProbeRoot::Excluded => b.graph.neighbors(b.root).to_vec(),
            };
            let c = Connector::new(&b.graph, source, target)?;
            let res = modulus(&c, opts)?;
            Ok(ProbeRow {
                radius: r,
                value: res.value,
                lower_bound: res.lower_bound,
                converged: res.converged,
                iterations: res.iterations,
                vertices: b.graph.len(),
                targets: c.target.len(),
            })
        })
        .collect::<Result<_>>()?;

    let monotone = rows.windows(2).all(|w| w[1].lower_bound <= w[0].value);
    let strictly_decreasing = rows.windows(2).all(|w| w[1].value < w[0].value);
    let log_fit = fit_log(&rows);
    let limit_fit = fit_limit(&rows);
    let preferred_fit = match (&log_fit, &limit_fit) {
        (Some(a), Some(b)) => Some(if a.relative_rss <= b.relative_rss { FitModel::Log } else { FitModel::Limit }),
        _ => None,
    };
    let slope_exponent = slope_exponent(&rows, opts.p);
    let verdict = verdict(slope_exponent);
    Ok(ProbeReport {
        p: opts.p,
        root,
        rows,
        monotone,
        strictly_decreasing,
        log_fit,
        limit_fit,
        preferred_fit,
        slope_exponent,
        verdict,
    })
}

fn total_sq(rows: &[ProbeRow]) -> f64 {
    rows.iter().map(|r| r.value * r.value).sum()
}

/// Ordinary least squares `y ≈ a + b x`.
fn ols(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let b = sxy / sxx;
    (my - b * mx, b)
}

fn fit_with(rows: &[ProbeRow], model: impl Fn(f64) -> f64, params: Vec<f64>) -> ModelFit {
    let rss: f64 = rows.iter().map(|r| (r.value - model(r.radius as f64)).powi(2)).sum();
    ModelFit {
        params,
        relative_rss: rss / total_sq(rows),
    }
}

/// `Mod(R) ≈ 1/(α + β ln R)`, fitted linearly on `1/Mod`.
fn fit_log(rows: &[ProbeRow]) -> Option<ModelFit> {
    if rows.len() < 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| ((r.radius as f64).ln(), 1.0 / r.value)).collect();
    let (alpha, beta) = ols(&pts);
    Some(fit_with(rows, |x| 1.0 / (alpha + beta * x.ln()), vec![alpha, beta]))
}

/// `Mod(R) ≈ a + b/R`.
fn fit_limit(rows: &[ProbeRow]) -> Option<ModelFit> {
    if rows.len() < 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (1.0 / r.radius as f64, r.value)).collect();
    let (a, b) = ols(&pts);
    Some(fit_with(rows, |x| a + b / x, vec![a, b]))
}

/// `κ` at or below this reads as transient.
pub const TRANSIENT_EXPONENT: f64 = -0.5;
/// `κ` at or above this reads as parabolic.
pub const PARABOLIC_EXPONENT: f64 = -0.2;

fn slope_exponent(rows: &[ProbeRow], p: f64) -> Option<f64> {
    if rows.len() < 3 || rows.iter().any(|r| !(r.value > 0.0)) {
        return None;
    }
    let seg = |i: usize| {
        let (a, b) = (&rows[i], &rows[i + 1]);
        let (ra, rb) = (a.radius as f64, b.radius as f64);
        let y = |v: f64| v.powf(-1.0 / (p - 1.0));
        ((y(b.value) - y(a.value)) / (rb / ra).ln(), (ra * rb).sqrt())
    };
    let (s0, m0) = seg(0);
    let (s1, m1) = seg(rows.len() - 2);
    if !(s0 > 0.0) {
        return None;
    }
    if s1 <= 0.0 {
        // Extremal length stopped growing altogether.
        return Some(f64::NEG_INFINITY);
    }
    Some((s1 / s0).ln() / (m1 / m0).ln())
}

fn verdict(kappa: Option<f64>) -> Verdict {
    match kappa {
        Some(k) if k <= TRANSIENT_EXPONENT => Verdict::TransientTrend,
        Some(k) if k >= PARABOLIC_EXPONENT => Verdict::ParabolicTrend,
        _ => Verdict::Inconclusive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{grid_graph, regular_tree};

    #[test]
    fn grid_probe_decreases() {
        let g = grid_graph(2, 21).unwrap();
        let r = vel_probe(&g, 220, &[1, 2, 4, 8], &ModulusOptions::new(2.0), ProbeRoot::Included).unwrap();
        assert!(r.monotone && r.strictly_decreasing);
        assert!(r.rows.iter().all(|row| row.converged));
        assert_eq!(r.rows[0].targets, 8);
    }

    #[test]
    fn tree_probe_is_bounded_below() {
        let g = regular_tree(3, 7).unwrap();
        let r = vel_probe(&g, 0, &[2, 4, 6], &ModulusOptions::new(2.0), ProbeRoot::Included).unwrap();
        assert!(r.monotone);
        assert!(r.decay_ratio().unwrap() > 0.5);
    }

    #[test]
    fn radius_beyond_the_graph_is_rejected() {
        let g = grid_graph(1, 5).unwrap();
        assert!(vel_probe(&g, 0, &[4], &ModulusOptions::new(2.0), ProbeRoot::Included).is_err());
        assert!(vel_probe(&g, 0, &[2, 1], &ModulusOptions::new(2.0), ProbeRoot::Included).is_err());
    }
}
