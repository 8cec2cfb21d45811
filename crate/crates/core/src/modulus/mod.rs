//! Vertex p-modulus of source-to-target path families.
//!
//! For a connector `(G, S, T)` the modulus is
//! `Mod_p = min Σ_v m(v)^p` over metrics `m ≥ 0` giving every `S → T` path
//! length at least 1, and the vertex extremal length is `1 / Mod_p`.

mod certificate;
mod divergence;
mod metric;
mod oracle;
mod path;
mod probe;
mod profile;
mod solver;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::Graph;

pub use certificate::{vel_certificate, Certificate, RootWeight};
pub use divergence::{divergence_check, dual_exponent, DivergenceReport, Trend, CONVERGING_RATIO, DIVERGING_RATIO};
pub use metric::VertexMetric;
pub use oracle::{minimal_paths, modulus_oracle, ORACLE_PATH_LIMIT};
pub use path::{path_length, shortest_path};
pub use probe::{vel_probe, FitModel, ModelFit, ProbeReport, ProbeRoot, PARABOLIC_EXPONENT, TRANSIENT_EXPONENT, ProbeRow, Verdict};
pub use profile::{lower_envelope, Profile};
pub use solver::modulus;

/// Vertex-weighted distances from `sources`, never relaxing out of `is_target`.
pub(crate) fn path_tree_distances(g: &Graph, w: &[f64], sources: &[usize], is_target: &[bool]) -> Vec<f64> {
    path::Tree::build(g, w, sources, is_target).dist
}

/// A graph with disjoint, nonempty source and target vertex sets.
#[derive(Clone, Debug)]
pub struct Connector<'a> {
    pub graph: &'a Graph,
    pub source: Vec<usize>,
    pub target: Vec<usize>,
}

impl<'a> Connector<'a> {
    /// Sorts and deduplicates both sets and checks they are disjoint and in range.
    pub fn new(graph: &'a Graph, mut source: Vec<usize>, mut target: Vec<usize>) -> Result<Self> {
        for &v in source.iter().chain(&target) {
            graph.check_vertex(v)?;
        }
        source.sort_unstable();
        source.dedup();
        target.sort_unstable();
        target.dedup();
        if source.is_empty() || target.is_empty() {
            return Err(invalid("source and target sets must be nonempty"));
        }
        if source.iter().any(|s| target.binary_search(s).is_ok()) {
            return Err(invalid("source and target sets must be disjoint"));
        }
        Ok(Self { graph, source, target })
    }

    pub(crate) fn target_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.graph.len()];
        for &t in &self.target {
            mask[t] = true;
        }
        mask
    }

    pub(crate) fn source_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.graph.len()];
        for &s in &self.source {
            mask[s] = true;
        }
        mask
    }
}

/// Smallest admissible exponent.
pub const MIN_P: f64 = 1.0 + 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusOptions {
    pub p: f64,
    /// Relative feasibility and stationarity tolerance.
    pub tol: f64,
    /// Constraint-generation rounds.
    pub max_iter: usize,
    /// Required path length (1 for the modulus proper).
    pub length_bound: f64,
}

impl ModulusOptions {
    pub fn new(p: f64) -> Self {
        Self {
            p,
            tol: 1e-6,
            max_iter: 10_000,
            length_bound: 1.0,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_length_bound(mut self, length: f64) -> Self {
        self.length_bound = length;
        self
    }

    pub(crate) fn check(&self) -> Result<()> {
        if !(self.p >= MIN_P && self.p.is_finite()) {
            return Err(invalid(format!("p must be finite and at least {MIN_P}, got {}", self.p)));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(invalid("tol must lie in (0, 1)"));
        }
        if self.max_iter == 0 {
            return Err(invalid("max_iter must be positive"));
        }
        if !(self.length_bound > 0.0 && self.length_bound.is_finite()) {
            return Err(invalid("length bound must be positive and finite"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusResult {
    pub p: f64,
    /// `Σ m(v)^p` of the returned metric, which is exactly feasible, so an upper bound on the modulus.
    pub value: f64,
    /// Dual objective of the final multipliers: a certified lower bound on the modulus.
    pub lower_bound: f64,
    pub metric: VertexMetric,
    /// Generated paths (vertex indices) of length at most `L(1 + tol)` under the metric.
    pub active_paths: Vec<Vec<usize>>,
    /// Constraint-generation rounds performed.
    pub iterations: usize,
    pub converged: bool,
    /// Shortest source-to-target length under `metric`; `None` when disconnected.
    pub min_path_length: Option<f64>,
    /// `1 / value`; `None` when no path exists (infinite extremal length).
    pub vel: Option<f64>,
    pub tol: f64,
    pub length_bound: f64,
}

impl ModulusResult {
    pub fn is_disconnected(&self) -> bool {
        self.min_path_length.is_none()
    }
}
