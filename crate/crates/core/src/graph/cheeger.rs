//! Finite-graph surrogate of the Cheeger constant.
//!
//! On a finite graph the infimum of `|∂W|/|W|` over all `W` is 0 (`W = V`), so
//! both modes minimise over connected `W` with `1 ≤ |W| ≤ |V|/2`.

use std::collections::VecDeque;

use crate::error::{invalid, Error, Result};

use super::Graph;

/// Default vertex-count guard for exhaustive enumeration.
pub const DEFAULT_EXHAUSTIVE_THRESHOLD: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheegerMode {
    /// Enumerates every connected set; the result is the true minimum.
    Exact,
    /// Ball and BFS-prefix sweeps from every vertex plus local search; an upper bound.
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheegerResult {
    pub mode: CheegerMode,
    /// `|∂W|` of the witness.
    pub boundary: usize,
    /// `|W|` of the witness.
    pub size: usize,
    /// Witness vertex indices, sorted.
    pub witness: Vec<usize>,
}

impl CheegerResult {
    pub fn value(&self) -> f64 {
        self.boundary as f64 / self.size as f64
    }
}

/// `b1/s1 < b2/s2` without rounding.
fn better(b1: usize, s1: usize, b2: usize, s2: usize) -> bool {
    b1 * s2 < b2 * s1
}

pub fn cheeger_constant(g: &Graph, mode: CheegerMode) -> Result<CheegerResult> {
    cheeger_constant_with(g, mode, DEFAULT_EXHAUSTIVE_THRESHOLD)
}

/// As [`cheeger_constant`] with an explicit exhaustive threshold (at most 64).
pub fn cheeger_constant_with(g: &Graph, mode: CheegerMode, threshold: usize) -> Result<CheegerResult> {
    if g.is_empty() {
        return Err(invalid("Cheeger constant of the empty graph"));
    }
    if g.len() < 2 {
        return Err(invalid("Cheeger constant needs at least 2 vertices (|W| <= |V|/2)"));
    }
    match mode {
        CheegerMode::Exact => {
            let limit = threshold.min(64);
            if g.len() > limit {
                return Err(Error::LimitExceeded {
                    what: "vertex count for exhaustive Cheeger enumeration",
                    limit,
                    actual: g.len(),
                });
            }
            Ok(exact(g))
        }
        CheegerMode::Heuristic => Ok(heuristic(g)),
    }
}

struct Enumerator<'a> {
    adj: &'a [u64],
    max_size: usize,
    best: (usize, usize, u64),
}

impl Enumerator<'_> {
    /// ESU-style extension: every connected set whose smallest vertex is `v` is visited once.
    fn extend(&mut self, sub: u64, ext: u64, closed: u64, above: u64, size: usize) {
        let boundary = (closed & !sub).count_ones() as usize;
        let (bb, bs, _) = self.best;
        if better(boundary, size, bb, bs) {
            self.best = (boundary, size, sub);
        }
        if size == self.max_size {
            return;
        }
        let mut ext = ext;
        while ext != 0 {
            let w = ext.trailing_zeros() as usize;
            ext &= ext - 1;
            let exclusive = self.adj[w] & !closed & above;
            self.extend(sub | 1 << w, ext | exclusive, closed | self.adj[w], above, size + 1);
        }
    }
}

fn exact(g: &Graph) -> CheegerResult {
    let n = g.len();
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect();
    let mut e = Enumerator {
        adj: &adj,
        max_size: n / 2,
        best: (usize::MAX / (n + 1), 1, 0),
    };
    for v in 0..n {
        let above = if v + 1 >= 64 { 0 } else { !0u64 << (v + 1) };
        let sub = 1u64 << v;
        e.extend(sub, adj[v] & above, sub | adj[v], above, 1);
    }
    let (boundary, size, mask) = e.best;
    CheegerResult {
        mode: CheegerMode::Exact,
        boundary,
        size,
        witness: (0..n).filter(|&v| mask >> v & 1 == 1).collect(),
    }
}

/// Incrementally tracked vertex set with its boundary size.
struct Tracked<'a> {
    g: &'a Graph,
    inside: Vec<bool>,
    /// Number of in-set neighbours of each vertex.
    touch: Vec<usize>,
    size: usize,
    boundary: usize,
}

impl<'a> Tracked<'a> {
    fn new(g: &'a Graph) -> Self {
        Tracked {
            g,
            inside: vec![false; g.len()],
            touch: vec![0; g.len()],
            size: 0,
            boundary: 0,
        }
    }

    fn add(&mut self, u: usize) {
        if self.touch[u] > 0 {
            self.boundary -= 1;
        }
        self.inside[u] = true;
        self.size += 1;
        for &w in self.g.neighbors(u) {
            if !self.inside[w] && self.touch[w] == 0 {
                self.boundary += 1;
            }
            self.touch[w] += 1;
        }
    }

    fn remove(&mut self, u: usize) {
        self.inside[u] = false;
        self.size -= 1;
        for &w in self.g.neighbors(u) {
            self.touch[w] -= 1;
            if !self.inside[w] && self.touch[w] == 0 {
                self.boundary -= 1;
            }
        }
        if self.touch[u] > 0 {
            self.boundary += 1;
        }
    }

    fn members(&self) -> Vec<usize> {
        (0..self.g.len()).filter(|&v| self.inside[v]).collect()
    }

    fn connected_without(&self, u: usize) -> bool {
        let Some(start) = (0..self.g.len()).find(|&v| self.inside[v] && v != u) else {
            return false;
        };
        let mut seen = vec![false; self.g.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &w in self.g.neighbors(x) {
                if self.inside[w] && w != u && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.size - 1
    }
}

fn heuristic(g: &Graph) -> CheegerResult {
    let n = g.len();
    let cap = n / 2;
    let mut best: (usize, usize, Vec<usize>) = (usize::MAX / (n + 1), 1, Vec::new());

    // BFS prefixes from every vertex; balls are the prefixes ending on a layer.
    for start in 0..n {
        let mut t = Tracked::new(g);
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut order = Vec::with_capacity(cap);
        while let Some(u) = queue.pop_front() {
            if t.size == cap {
                break;
            }
            t.add(u);
            order.push(u);
            if better(t.boundary, t.size, best.0, best.1) {
                best = (t.boundary, t.size, order.clone());
            }
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    // Single-vertex flips that keep the set connected and within size.
    let mut t = Tracked::new(g);
    for &v in &best.2 {
        t.add(v);
    }
    for _ in 0..10 * n {
        let mut improved: Option<(usize, bool, usize, usize)> = None;
        let (mut bb, mut bs) = (t.boundary, t.size);
        for u in 0..n {
            if t.inside[u] {
                if t.size > 1 && t.connected_without(u) {
                    t.remove(u);
                    if better(t.boundary, t.size, bb, bs) {
                        (bb, bs) = (t.boundary, t.size);
                        improved = Some((u, false, bb, bs));
                    }
                    t.add(u);
                }
            } else if t.touch[u] > 0 && t.size < cap {
                t.add(u);
                if better(t.boundary, t.size, bb, bs) {
                    (bb, bs) = (t.boundary, t.size);
                    improved = Some((u, true, bb, bs));
                }
                t.remove(u);
            }
        }
        match improved {
            Some((u, true, ..)) => t.add(u),
            Some((u, false, ..)) => t.remove(u),
            None => break,
        }
    }
    CheegerResult {
        mode: CheegerMode::Heuristic,
        boundary: t.boundary,
        size: t.size,
        witness: t.members(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, cycle_graph, grid_graph};
    use crate::graph::vertex_boundary;

    fn assert_witness(g: &Graph, r: &CheegerResult) {
        assert_eq!(r.witness.len(), r.size);
        assert_eq!(vertex_boundary(g, &r.witness).unwrap().len(), r.boundary);
        assert!(2 * r.size <= g.len());
        let sub = g.induced(&r.witness);
        assert!(sub.is_connected());
    }

    #[test]
    fn k4_is_one() {
        let g = complete_graph(4).unwrap();
        let r = cheeger_constant(&g, CheegerMode::Exact).unwrap();
        assert_eq!((r.boundary, r.size), (2, 2));
        assert_witness(&g, &r);
    }

    #[test]
    fn c8_is_one_half() {
        let g = cycle_graph(8).unwrap();
        let r = cheeger_constant(&g, CheegerMode::Exact).unwrap();
        assert_eq!(r.value(), 0.5);
        assert_eq!(r.size, 4);
        assert_witness(&g, &r);
    }

    #[test]
    fn heuristic_bounds_exact() {
        let g = grid_graph(2, 4).unwrap();
        let ex = cheeger_constant(&g, CheegerMode::Exact).unwrap();
        let he = cheeger_constant(&g, CheegerMode::Heuristic).unwrap();
        assert_witness(&g, &ex);
        assert_witness(&g, &he);
        assert!(ex.value() <= he.value());
        // Two columns of the 4x4 grid: boundary 4, size 8.
        assert_eq!(ex.value(), 0.5);
    }

    #[test]
    fn exact_guard_and_empty_graph() {
        assert!(matches!(
            cheeger_constant(&grid_graph(2, 5).unwrap(), CheegerMode::Exact),
            Err(Error::LimitExceeded { .. })
        ));
        assert!(cheeger_constant(&Graph::with_vertices(0), CheegerMode::Heuristic).is_err());
    }
}
