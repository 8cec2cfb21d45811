//! Constraint generation with an exact dual coordinate-ascent inner solver.
//!
//! For a set `Λ` of paths with multipliers `λ ≥ 0`, write `ρ_v = Σ_{γ ∋ v} λ_γ`.
//! Minimising the Lagrangian over `m` gives `m_v = (ρ_v / p)^{1/(p−1)}` and the
//! concave dual `D(λ) = L Σλ − (p − 1) Σ_v m_v^p`. Each inner step maximises
//! `D` exactly in one coordinate, which makes that path's length equal `L`
//! (or leaves `λ_γ = 0` with length already at least `L`). Because `Λ` is a
//! subfamily, every `D(λ)` is a lower bound for the full problem.

use std::collections::HashSet;

use crate::error::Result;

use super::path::Tree;
use super::{Connector, ModulusOptions, ModulusResult, VertexMetric};

/// Inner sweeps allowed per constraint-generation round.
const SWEEPS_PER_ROUND: usize = 4000;

/// Sweeps between exact recomputations of `ρ` from `λ`.
const REFRESH_EVERY: usize = 64;

struct Paths {
    offsets: Vec<usize>,
    verts: Vec<usize>,
    seen: HashSet<Vec<usize>>,
}

impl Paths {
    fn new() -> Self {
        Self {
            offsets: vec![0],
            verts: Vec::new(),
            seen: HashSet::new(),
        }
    }

    fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    fn get(&self, j: usize) -> &[usize] {
        &self.verts[self.offsets[j]..self.offsets[j + 1]]
    }

    fn insert(&mut self, path: Vec<usize>) -> bool {
        if self.seen.contains(&path) {
            return false;
        }
        self.verts.extend_from_slice(&path);
        self.offsets.push(self.verts.len());
        self.seen.insert(path);
        true
    }
}

struct Dual {
    p: f64,
    /// `1 / (p − 1)`.
    e: f64,
    length: f64,
    lambda: Vec<f64>,
    rho: Vec<f64>,
    m: Vec<f64>,
    scratch: Vec<f64>,
}

impl Dual {
    fn new(n: usize, p: f64, length: f64) -> Self {
        Self {
            p,
            e: 1.0 / (p - 1.0),
            length,
            lambda: Vec::new(),
            rho: vec![0.0; n],
            m: vec![0.0; n],
            scratch: Vec::new(),
        }
    }

    fn metric_of(&self, rho: f64) -> f64 {
        if rho <= 0.0 {
            0.0
        } else {
            self.pow_e(rho / self.p)
        }
    }

    /// `x^e` with the common exponents (p = 2, 3) special-cased.
    #[inline]
    fn pow_e(&self, x: f64) -> f64 {
        if self.e == 1.0 {
            x
        } else if self.e == 0.5 {
            x.sqrt()
        } else {
            x.powf(self.e)
        }
    }

    fn refresh(&mut self, paths: &Paths) {
        self.rho.iter_mut().for_each(|r| *r = 0.0);
        for j in 0..paths.len() {
            let l = self.lambda[j];
            if l > 0.0 {
                for &v in paths.get(j) {
                    self.rho[v] += l;
                }
            }
        }
        for v in 0..self.rho.len() {
            self.m[v] = self.metric_of(self.rho[v]);
        }
    }

    /// Root `t ≥ 0` of `Σ ((a_v + t)/p)^e = L`, or 0 when the sum already reaches `L` at 0.
    fn solve_step(&self, a: &[f64], guess: f64) -> f64 {
        let (p, e, len) = (self.p, self.e, self.length);
        let k = a.len() as f64;
        if e == 1.0 {
            return ((p * len - a.iter().sum::<f64>()) / k).max(0.0);
        }
        let f = |t: f64| -> f64 { a.iter().map(|&x| self.pow_e((x + t) / p)).sum::<f64>() };
        if f(0.0) >= len {
            return 0.0;
        }
        // Every term equals L/k at t = c − a_v, which brackets the root.
        let c = p * (len / k).powf(p - 1.0);
        let (amin, amax) = a.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        let mut lo = (c - amax).max(0.0);
        let mut hi = (c - amin).max(lo);
        let mut t = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
        for _ in 0..100 {
            let (val, der) = a.iter().fold((0.0, 0.0), |(s, d), &x| {
                let base = (x + t) / p;
                let pw = self.pow_e(base);
                (s + pw, d + if base > 0.0 { e * pw / (x + t) } else { 0.0 })
            });
            let r = val - len;
            if r.abs() <= 1e-15 * len {
                return t;
            }
            if r < 0.0 {
                lo = t;
            } else {
                hi = t;
            }
            let newton = t - r / der;
            t = if der > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo <= 1e-16 * hi.max(1e-300) {
                break;
            }
        }
        t
    }

    /// One pass of exact coordinate steps; returns the largest relative KKT
    /// residual seen before each step.
    fn sweep(&mut self, paths: &Paths) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..paths.len() {
            let path = paths.get(j);
            let len: f64 = path.iter().map(|&v| self.m[v]).sum();
            let lam = self.lambda[j];
            let resid = if lam > 0.0 {
                (len - self.length).abs()
            } else {
                (self.length - len).max(0.0)
            } / self.length;
            worst = worst.max(resid);
            if resid == 0.0 {
                continue;
            }
            let mut a = std::mem::take(&mut self.scratch);
            a.clear();
            a.extend(path.iter().map(|&v| (self.rho[v] - lam).max(0.0)));
            let t = self.solve_step(&a, lam);
            for (&v, &av) in path.iter().zip(&a) {
                self.rho[v] = av + t;
                self.m[v] = self.metric_of(self.rho[v]);
            }
            self.lambda[j] = t;
            self.scratch = a;
        }
        worst
    }

    fn objective(&self) -> f64 {
        let energy: f64 = self.m.iter().map(|m| m.powf(self.p)).sum();
        self.length * self.lambda.iter().sum::<f64>() - (self.p - 1.0) * energy
    }
}

/// Computes the `p`-modulus of the connector's path family.
///
/// Rounds alternate an inner dual solve on the generated paths with a
/// Dijkstra separation step that adds the tree path to every target closer
/// than `L(1 − tol)`. The returned metric is rescaled to make the shortest path
/// exactly `L`, so `value` is attained by a feasible metric while
/// `lower_bound` is certified by the dual.
pub fn modulus(c: &Connector, opts: &ModulusOptions) -> Result<ModulusResult> {
    opts.check()?;
    let g = c.graph;
    let n = g.len();
    let len = opts.length_bound;
    let tol_inner = opts.tol / 10.0;
    let is_target = c.target_mask();

    let mut paths = Paths::new();
    let mut dual = Dual::new(n, opts.p, len);
    let mut rounds = 0;
    let mut converged = false;
    let mut inner_ok = true;
    loop {
        let tree = Tree::build(g, &dual.m, &c.source, &is_target);
        let reachable: Vec<usize> = c.target.iter().copied().filter(|&t| tree.dist[t].is_finite()).collect();
        if reachable.is_empty() {
            return Ok(disconnected(n, opts, rounds));
        }
        let shortest = reachable.iter().map(|&t| tree.dist[t]).fold(f64::INFINITY, f64::min);
        if inner_ok && shortest >= len * (1.0 - opts.tol) {
            converged = true;
            break;
        }
        if rounds >= opts.max_iter {
            break;
        }
        rounds += 1;
        // Loose inner solves while the outer violation is large, tight at the end.
        let inner_tol = (0.1 * (1.0 - shortest / len)).clamp(tol_inner, 1e-2);
        for &t in &reachable {
            if tree.dist[t] < len * (1.0 - opts.tol) && paths.insert(tree.path_to(t)) {
                dual.lambda.push(0.0);
            }
        }
        inner_ok = false;
        for sweep in 1..=SWEEPS_PER_ROUND {
            let resid = dual.sweep(&paths);
            if sweep % REFRESH_EVERY == 0 {
                dual.refresh(&paths);
            }
            if resid <= inner_tol {
                inner_ok = resid <= tol_inner;
                break;
            }
        }
        dual.refresh(&paths);
    }

    let lower_bound = dual.objective().max(0.0);
    let tree = Tree::build(g, &dual.m, &c.source, &is_target);
    let shortest = c.target.iter().map(|&t| tree.dist[t]).fold(f64::INFINITY, f64::min);
    let scale = if shortest > 0.0 { len / shortest } else { 1.0 };
    let metric: Vec<f64> = dual.m.iter().map(|m| m * scale).collect();
    let value: f64 = metric.iter().map(|m| m.powf(opts.p)).sum();
    let final_tree = Tree::build(g, &metric, &c.source, &is_target);
    let min_len = c.target.iter().map(|&t| final_tree.dist[t]).fold(f64::INFINITY, f64::min);
    let active_paths = (0..paths.len())
        .map(|j| paths.get(j))
        .filter(|p| p.iter().map(|&v| metric[v]).sum::<f64>() <= len * (1.0 + opts.tol))
        .map(<[usize]>::to_vec)
        .collect();
    Ok(ModulusResult {
        p: opts.p,
        value,
        lower_bound: lower_bound.min(value),
        metric: VertexMetric::from_raw(metric),
        active_paths,
        iterations: rounds,
        converged,
        min_path_length: Some(min_len),
        vel: (value > 0.0).then(|| 1.0 / value),
        tol: opts.tol,
        length_bound: len,
    })
}

fn disconnected(n: usize, opts: &ModulusOptions, rounds: usize) -> ModulusResult {
    ModulusResult {
        p: opts.p,
        value: 0.0,
        lower_bound: 0.0,
        metric: VertexMetric::from_raw(vec![0.0; n]),
        active_paths: Vec::new(),
        iterations: rounds,
        converged: true,
        min_path_length: None,
        vel: None,
        tol: opts.tol,
        length_bound: opts.length_bound,
    }
}
