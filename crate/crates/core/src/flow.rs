//! The water-flow exploration of a positive vertex metric.
//!
//! Water enters at the root and spreads at unit speed in `d_m` distance. Vertex
//! `v` is getting wet on `I_v = [d_m(o, v) − m(v), d_m(o, v)]`, its wet fraction
//! is `s_v(h) = |I_v ∩ [0, h]| / m(v)` and `s(h) = Σ_v s_v(h)`. `W_h` is the set of
//! fully wet vertices and `G_h = {v : h ∈ I_v}` the wetting front.
//!
//! Everything here is exact piecewise-linear bookkeeping over the sorted
//! interval endpoints; there is no quadrature.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{vertex_boundary, Graph};
use crate::modulus::{Profile, VertexMetric};

pub const FLOW_FORMAT: &str = "dpack-flow/1";

/// Relative tolerance for the numeric inequality checks.
const CHECK_TOL: f64 = 1e-9;

/// `d_m(o, v)`: least `m`-length of a path from `o` to `v`, both endpoints counted.
///
/// Requires `m > 0` everywhere; unreachable vertices get `+∞`.
pub fn dm_distances(g: &Graph, m: &VertexMetric, o: usize) -> Result<Vec<f64>> {
    g.check_vertex(o)?;
    if m.len() != g.len() {
        return Err(invalid("metric and graph sizes differ"));
    }
    if let Some(v) = (0..m.len()).find(|&v| m.get(v) <= 0.0) {
        return Err(invalid(format!("metric must be positive, m({}) = {}", g.label(v), m.get(v))));
    }
    let no_targets = vec![false; g.len()];
    Ok(crate::modulus::path_tree_distances(g, m.values(), &[o], &no_targets))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WetnessProcess {
    pub root: usize,
    pub metric: VertexMetric,
    pub distances: Vec<f64>,
    /// `(min I_v, max I_v)` per vertex.
    pub intervals: Vec<(f64, f64)>,
    /// Sorted distinct interval endpoints.
    pub breakpoints: Vec<f64>,
    /// `s` at each breakpoint.
    pub s_values: Vec<f64>,
}

impl WetnessProcess {
    /// Builds the process on a connected graph.
    pub fn new(g: &Graph, m: &VertexMetric, o: usize) -> Result<Self> {
        let distances = dm_distances(g, m, o)?;
        if let Some(v) = distances.iter().position(|d| !d.is_finite()) {
            return Err(invalid(format!("vertex {} is not reachable from the root", g.label(v))));
        }
        let raw: Vec<(f64, f64)> = distances.iter().zip(m.values()).map(|(&d, &w)| (d - w, d)).collect();
        let breakpoints = merged_endpoints(&raw);
        let snap = |x: f64| nearest(&breakpoints, x);
        let intervals: Vec<(f64, f64)> = raw.iter().map(|&(a, b)| (snap(a), snap(b))).collect();
        let mut proc = Self {
            root: o,
            metric: m.clone(),
            distances,
            intervals,
            breakpoints,
            s_values: Vec::new(),
        };
        proc.s_values = proc.breakpoints.iter().map(|&h| proc.s(h)).collect();
        Ok(proc)
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// `s(h) = Σ_v clamp((h − min I_v)/|I_v|, 0, 1)`.
    pub fn s(&self, h: f64) -> f64 {
        self.intervals.iter().map(|&(a, b)| wet_fraction(a, b, h)).sum()
    }

    /// `(W_h, G_h)` as sorted vertex lists.
    pub fn wet_sets(&self, h: f64) -> (Vec<usize>, Vec<usize>) {
        let wet = (0..self.len()).filter(|&v| h >= self.intervals[v].1).collect();
        let front = (0..self.len())
            .filter(|&v| self.intervals[v].0 <= h && h <= self.intervals[v].1)
            .collect();
        (wet, front)
    }

    /// `Σ_{v ∈ G_h} 1/m(v)` for `h` inside a linearity interval.
    pub fn slope(&self, h: f64) -> f64 {
        self.intervals
            .iter()
            .filter(|&&(a, b)| a < h && h < b)
            .map(|&(a, b)| 1.0 / (b - a))
            .sum()
    }

    /// Midpoints of the linearity intervals between consecutive breakpoints.
    pub fn midpoints(&self) -> Vec<f64> {
        self.breakpoints.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }
}

fn wet_fraction(a: f64, b: f64, h: f64) -> f64 {
    if h >= b {
        1.0
    } else if h <= a {
        0.0
    } else {
        (h - a) / (b - a)
    }
}

/// Sorted interval endpoints with values closer than a relative `1e-12`
/// merged, so sums of floats that agree in exact arithmetic meet at one point.
fn merged_endpoints(intervals: &[(f64, f64)]) -> Vec<f64> {
    let mut all: Vec<f64> = intervals.iter().flat_map(|&(a, b)| [a, b]).collect();
    all.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(all.len());
    for x in all {
        match out.last() {
            Some(&y) if x - y <= 1e-12 * (1.0 + y.abs()) => {}
            _ => out.push(x),
        }
    }
    out
}

fn nearest(sorted: &[f64], x: f64) -> f64 {
    let i = sorted.partition_point(|&y| y < x);
    let below = i.checked_sub(1).map(|j| sorted[j]);
    let above = sorted.get(i).copied();
    match (below, above) {
        (Some(b), Some(a)) => {
            if x - b <= a - x {
                b
            } else {
                a
            }
        }
        (Some(b), None) => b,
        (None, Some(a)) => a,
        (None, None) => x,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowCheck {
    pub h: f64,
    #[serde(rename = "sWh")]
    pub s: f64,
    #[serde(rename = "Gh_size")]
    pub gh_size: usize,
    #[serde(rename = "Wh_size")]
    pub wh_size: usize,
    /// `|∂W_h| ≥ g(|W_h|)` (vacuous while `W_h` is empty).
    pub premise: bool,
    /// `G_h = ∂W_h`, with `∂∅ := {o}`.
    pub front_is_boundary: bool,
    pub pass_a: bool,
    pub pass_b: bool,
    pub pass_c: bool,
    pub pass_d: bool,
    /// `ds/dh` on this interval.
    pub slope: f64,
    /// `f(s)^{d/(d−1)} / (Σ_{G_h} m^{d−1})^{1/(d−1)}`.
    pub holder_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowReport {
    pub d: f64,
    pub checks: Vec<FlowCheck>,
    /// Premise held at every midpoint; otherwise (c) and (d) are informational.
    pub premise_holds: bool,
    /// `h` values where an asserted check failed.
    pub violations: Vec<f64>,
    /// `∫ Σ_{G_h} m^{d−1} dh`, integrated exactly over the linearity intervals.
    pub integral: f64,
    /// `Σ_v m(v)^d`.
    pub energy: f64,
    pub integral_ok: bool,
    pub all_pass: bool,
}

/// Evaluates at every linearity midpoint `h`:
/// (a) `s ≤ |W_h| + |G_h|`; (b) `|G_h| < s/2 ⇒ |W_h| ≥ s/2`;
/// (c) `|G_h| ≥ f(s)` with `f(x) = min(g(x/2), x/2)`;
/// (d) `ds/dh ≥ f(s)^{d/(d−1)} / (Σ_{G_h} m^{d−1})^{1/(d−1)}`.
///
/// (c) and (d) rely on the premise `|∂W| ≥ g(|W|)`, which is tested on every
/// `W_h` met along the way; when it fails they are reported but not asserted.
pub fn verify_flow_inequalities(g: &Graph, proc: &WetnessProcess, profile: &Profile, d: f64) -> Result<FlowReport> {
    if !(d > 1.0 && d.is_finite()) {
        return Err(invalid("d must be finite and greater than 1"));
    }
    if g.len() != proc.len() {
        return Err(invalid("process and graph sizes differ"));
    }
    let mids = proc.midpoints();
    let m = proc.metric.values();
    let evaluated: Vec<(FlowCheck, f64)> = mids
        .par_iter()
        .map(|&h| {
            let (wet, front) = proc.wet_sets(h);
            let s = proc.s(h);
            let (w, gs) = (wet.len() as f64, front.len() as f64);
            let boundary = if wet.is_empty() {
                vec![proc.root]
            } else {
                vertex_boundary(g, &wet).expect("indices are in range")
            };
            let premise = wet.is_empty() || boundary.len() as f64 >= profile.eval(w);
            let f = profile.eval(s / 2.0).min(s / 2.0);
            let slope = proc.slope(h);
            let moment: f64 = front.iter().map(|&v| m[v].powf(d - 1.0)).sum();
            let holder_bound = f.powf(d / (d - 1.0)) / moment.powf(1.0 / (d - 1.0));
            let slack = CHECK_TOL * (1.0 + s);
            let check = FlowCheck {
                h,
                s,
                gh_size: front.len(),
                wh_size: wet.len(),
                premise,
                front_is_boundary: boundary == front,
                pass_a: s <= w + gs + slack,
                pass_b: gs >= s / 2.0 || w + slack >= s / 2.0,
                pass_c: gs + slack >= f,
                pass_d: slope * (1.0 + CHECK_TOL) >= holder_bound,
                slope,
                holder_bound,
            };
            (check, moment)
        })
        .collect();
    let (checks, moments): (Vec<FlowCheck>, Vec<f64>) = evaluated.into_iter().unzip();

    let premise_holds = checks.iter().all(|c| c.premise);
    let violations: Vec<f64> = checks
        .iter()
        .filter(|c| !(c.pass_a && c.pass_b && c.front_is_boundary && (!premise_holds || (c.pass_c && c.pass_d))))
        .map(|c| c.h)
        .collect();
    let integral: f64 = proc.breakpoints.windows(2).zip(&moments).map(|(w, mo)| (w[1] - w[0]) * mo).sum();
    let energy: f64 = m.iter().map(|x| x.powf(d)).sum();
    let integral_ok = (integral - energy).abs() <= 1e-9 * energy;
    Ok(FlowReport {
        d,
        all_pass: violations.is_empty() && integral_ok && premise_holds,
        checks,
        premise_holds,
        violations,
        integral,
        energy,
        integral_ok,
    })
}

/// Versioned export of the process and its checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowDocument {
    pub format: String,
    pub breakpoints: Vec<f64>,
    pub s_values: Vec<f64>,
    pub checks: Vec<FlowCheck>,
}

impl FlowDocument {
    pub fn new(proc: &WetnessProcess, report: Option<&FlowReport>) -> Self {
        Self {
            format: FLOW_FORMAT.to_string(),
            breakpoints: proc.breakpoints.clone(),
            s_values: proc.s_values.clone(),
            checks: report.map(|r| r.checks.clone()).unwrap_or_default(),
        }
    }
}
