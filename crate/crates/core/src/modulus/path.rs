//! Vertex-weighted path lengths and shortest paths.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{invalid, Result};
use crate::graph::Graph;

use super::VertexMetric;

/// `Σ_{v ∈ path} m(v)`, endpoints included. Consecutive vertices must be adjacent.
pub fn path_length(g: &Graph, m: &VertexMetric, path: &[usize]) -> Result<f64> {
    if path.is_empty() {
        return Err(invalid("path is empty"));
    }
    for &v in path {
        g.check_vertex(v)?;
    }
    if m.len() != g.len() {
        return Err(invalid("metric and graph sizes differ"));
    }
    if let Some(w) = path.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
        return Err(invalid(format!(
            "vertices {} and {} are consecutive on the path but not adjacent",
            g.label(w[0]),
            g.label(w[1])
        )));
    }
    Ok(path.iter().map(|&v| m.get(v)).sum())
}

#[derive(Clone, Copy, PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multi-source Dijkstra tree for vertex weights.
///
/// `dist[s] = w[s]` at the sources; entering `v` adds `w[v]`. Target vertices
/// are settled but never relaxed, so every tree path to a target starts at its
/// last source and meets no other target.
pub(crate) struct Tree {
    pub dist: Vec<f64>,
    pub parent: Vec<usize>,
}

pub(crate) const NONE: usize = usize::MAX;

impl Tree {
    pub fn build(g: &Graph, w: &[f64], sources: &[usize], is_target: &[bool]) -> Self {
        let n = g.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut parent = vec![NONE; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        for &s in sources {
            dist[s] = w[s];
            heap.push(Entry(w[s], s));
        }
        while let Some(Entry(d, u)) = heap.pop() {
            if done[u] || d > dist[u] {
                continue;
            }
            done[u] = true;
            if is_target[u] {
                continue;
            }
            for &v in g.neighbors(u) {
                let nd = d + w[v];
                if nd < dist[v] {
                    dist[v] = nd;
                    parent[v] = u;
                    heap.push(Entry(nd, v));
                }
            }
        }
        Self { dist, parent }
    }

    /// Tree path from its source to `t`.
    pub fn path_to(&self, t: usize) -> Vec<usize> {
        let mut path = vec![t];
        let mut v = t;
        while self.parent[v] != NONE {
            v = self.parent[v];
            path.push(v);
        }
        path.reverse();
        path
    }
}

/// Minimum-length path from `sources` to `targets` under `m`, or `None` when
/// no target is reachable.
pub fn shortest_path(g: &Graph, m: &VertexMetric, sources: &[usize], targets: &[usize]) -> Result<Option<(Vec<usize>, f64)>> {
    if m.len() != g.len() {
        return Err(invalid("metric and graph sizes differ"));
    }
    if sources.is_empty() || targets.is_empty() {
        return Err(invalid("source and target sets must be nonempty"));
    }
    let mut is_target = vec![false; g.len()];
    for &v in sources.iter().chain(targets) {
        g.check_vertex(v)?;
    }
    for &t in targets {
        is_target[t] = true;
    }
    if sources.iter().any(|&s| is_target[s]) {
        return Err(invalid("source and target sets must be disjoint"));
    }
    let tree = Tree::build(g, m.values(), sources, &is_target);
    let best = targets
        .iter()
        .copied()
        .filter(|&t| tree.dist[t].is_finite())
        .min_by(|&a, &b| tree.dist[a].total_cmp(&tree.dist[b]).then(a.cmp(&b)));
    Ok(best.map(|t| (tree.path_to(t), tree.dist[t])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::grid_graph;

    #[test]
    fn lengths() {
        let g = grid_graph(1, 5).unwrap();
        let m = VertexMetric::uniform(5, 1.0).unwrap();
        assert_eq!(path_length(&g, &m, &[2]).unwrap(), 1.0);
        assert_eq!(path_length(&g, &m, &[0, 1, 2, 3, 4]).unwrap(), 5.0);
        assert!(path_length(&g, &m, &[0, 2]).is_err());
    }

    #[test]
    fn uniform_grid_path_is_a_staircase() {
        let g = grid_graph(2, 6).unwrap();
        let m = VertexMetric::uniform(36, 1.0).unwrap();
        let (path, len) = shortest_path(&g, &m, &[0], &[35]).unwrap().unwrap();
        // Hop count 10, so 11 vertices.
        assert_eq!(len, 11.0);
        assert_eq!(path.len(), 11);
        assert_eq!(path_length(&g, &m, &path).unwrap(), len);
    }

    #[test]
    fn zero_corridor_is_used() {
        let g = grid_graph(2, 5).unwrap();
        // Row y = 4 is free except its endpoints.
        let mut w = vec![1.0; 25];
        for x in 1..4 {
            w[20 + x] = 0.0;
        }
        let m = VertexMetric::new(w).unwrap();
        let (path, len) = shortest_path(&g, &m, &[15], &[19]).unwrap().unwrap();
        assert_eq!(len, 4.0);
        assert!(path.contains(&22));
    }

    #[test]
    fn disconnected_is_none() {
        let g = Graph::from_edges(vec![0, 1, 2], [(0, 1)]).unwrap();
        let m = VertexMetric::uniform(3, 1.0).unwrap();
        assert!(shortest_path(&g, &m, &[0], &[2]).unwrap().is_none());
    }
}
