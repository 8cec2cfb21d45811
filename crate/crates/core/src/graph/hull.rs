use crate::error::{invalid, Result};

use super::{Graph, RootedGraph};

/// Vertices outside `set` adjacent to some vertex of `set`, sorted by index.
pub fn vertex_boundary(g: &Graph, set: &[usize]) -> Result<Vec<usize>> {
    let mut inside = vec![false; g.len()];
    for &v in set {
        g.check_vertex(v)?;
        inside[v] = true;
    }
    let mut seen = vec![false; g.len()];
    let mut out = Vec::new();
    for &u in set {
        for &w in g.neighbors(u) {
            if !inside[w] && !seen[w] {
                seen[w] = true;
                out.push(w);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Closed combinatorial ball of radius `k` around `o`, as an induced subgraph rooted at `o`.
///
/// Vertices are ordered by distance to the root, then by index in `g`.
pub fn ball(g: &Graph, o: usize, k: usize) -> Result<RootedGraph> {
    g.check_vertex(o)?;
    let dist = g.bfs_distances(&[o]);
    let mut members: Vec<(usize, usize)> = dist
        .iter()
        .enumerate()
        .filter_map(|(v, d)| d.filter(|&d| d <= k).map(|d| (d, v)))
        .collect();
    members.sort_unstable();
    let order: Vec<usize> = members.into_iter().map(|(_, v)| v).collect();
    let sub = g.induced(&order);
    Ok(RootedGraph { graph: sub, root: 0 })
}

/// The hull sequence `W_0 = {o}`, `W_{k+1} = W_k ∪ ∂W_k`.
///
/// `W_k` is the hop ball of radius `k`; `∂W_k` is the sphere at distance `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullSequence {
    pub root: usize,
    /// Hop distance from the root, `None` outside the root's component.
    pub depth: Vec<Option<usize>>,
    /// `n_k = |W_k|` for `k = 0..=K`.
    pub sizes: Vec<usize>,
    /// `|∂W_k|` for `k = 0..=K`.
    pub boundary_sizes: Vec<usize>,
}

impl HullSequence {
    /// Number of sets `W_0..=W_K` in the sequence.
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// Last index `K`.
    pub fn last(&self) -> usize {
        self.sizes.len() - 1
    }

    /// Members of `W_k`, sorted by index.
    pub fn set(&self, k: usize) -> Vec<usize> {
        self.depth
            .iter()
            .enumerate()
            .filter_map(|(v, d)| d.filter(|&d| d <= k).map(|_| v))
            .collect()
    }

    /// Members of `∂W_k`, sorted by index.
    pub fn boundary(&self, k: usize) -> Vec<usize> {
        self.layer(k + 1)
    }

    /// Vertices at exact hop distance `j` from the root.
    pub fn layer(&self, j: usize) -> Vec<usize> {
        self.depth
            .iter()
            .enumerate()
            .filter_map(|(v, d)| (*d == Some(j)).then_some(v))
            .collect()
    }
}

/// Computes `W_0..=W_K`, stopping early at the first `k` with `∂W_k = ∅`.
///
/// `max_k = None` runs until the root's component is exhausted.
pub fn hull_sequence(g: &Graph, o: usize, max_k: Option<usize>) -> Result<HullSequence> {
    g.check_vertex(o)?;
    let depth = g.bfs_distances(&[o]);
    let ecc = depth.iter().flatten().copied().max().unwrap_or(0);
    let mut layer_sizes = vec![0usize; ecc + 2];
    for d in depth.iter().flatten() {
        layer_sizes[*d] += 1;
    }
    let last = max_k.map_or(ecc, |k| k.min(ecc));
    let mut sizes = Vec::with_capacity(last + 1);
    let mut boundary_sizes = Vec::with_capacity(last + 1);
    let mut total = 0;
    for k in 0..=last {
        total += layer_sizes[k];
        sizes.push(total);
        boundary_sizes.push(layer_sizes[k + 1]);
    }
    if sizes.is_empty() {
        return Err(invalid("empty hull sequence"));
    }
    Ok(HullSequence {
        root: o,
        depth,
        sizes,
        boundary_sizes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle_graph, grid_graph, regular_tree};

    #[test]
    fn boundary_of_everything_is_empty() {
        let g = cycle_graph(6).unwrap();
        let all: Vec<usize> = (0..6).collect();
        assert!(vertex_boundary(&g, &all).unwrap().is_empty());
    }

    #[test]
    fn boundary_of_grid_vertex_is_its_neighbors() {
        let g = grid_graph(2, 5).unwrap();
        let center = 12;
        assert_eq!(vertex_boundary(&g, &[center]).unwrap(), vec![7, 11, 13, 17]);
    }

    #[test]
    fn boundary_of_cycle_arc() {
        let g = cycle_graph(8).unwrap();
        assert_eq!(vertex_boundary(&g, &[2, 3, 4, 5]).unwrap(), vec![1, 6]);
    }

    #[test]
    fn boundary_rejects_foreign_vertex() {
        let g = cycle_graph(4).unwrap();
        assert!(vertex_boundary(&g, &[7]).is_err());
    }

    #[test]
    fn ball_sizes() {
        let g = grid_graph(2, 5).unwrap();
        let b0 = ball(&g, 12, 0).unwrap();
        assert_eq!(b0.graph.len(), 1);
        assert_eq!(b0.root_label(), 12);

        let tree = regular_tree(3, 4).unwrap();
        assert_eq!(ball(&tree, 0, 2).unwrap().graph.len(), 10);

        let full = ball(&g, 0, g.eccentricity(0)).unwrap();
        assert_eq!(full.graph.len(), g.len());
        assert_eq!(full.graph.edge_count(), g.edge_count());
    }

    #[test]
    fn hull_of_path_from_end() {
        let g = grid_graph(1, 5).unwrap();
        let h = hull_sequence(&g, 0, None).unwrap();
        assert_eq!(h.sizes, vec![1, 2, 3, 4, 5]);
        assert_eq!(h.boundary_sizes, vec![1, 1, 1, 1, 0]);
    }

    #[test]
    fn hull_of_grid_is_clipped_diamond() {
        let g = grid_graph(2, 7).unwrap();
        let center = 3 * 7 + 3;
        let h = hull_sequence(&g, center, None).unwrap();
        // Brute force: W_k = {(x,y) : |x-3| + |y-3| <= k} inside the box.
        for k in 0..h.len() {
            let expect: Vec<usize> = (0..49)
                .filter(|&v| {
                    let (x, y) = ((v % 7) as i64, (v / 7) as i64);
                    (x - 3).abs() + (y - 3).abs() <= k as i64
                })
                .collect();
            assert_eq!(h.set(k), expect, "k = {k}");
            assert_eq!(h.sizes[k], expect.len());
        }
        assert_eq!(*h.sizes.last().unwrap(), 49);
    }

    #[test]
    fn hull_of_tree_grows_geometrically() {
        let g = regular_tree(3, 6).unwrap();
        let h = hull_sequence(&g, 0, None).unwrap();
        for k in 0..=6 {
            // 1 + 3 (2^k - 1)
            assert_eq!(h.sizes[k], 1 + 3 * ((1 << k) - 1));
        }
    }

    #[test]
    fn hull_sets_grow_by_their_boundary() {
        let g = grid_graph(2, 6).unwrap();
        let h = hull_sequence(&g, 7, Some(3)).unwrap();
        assert_eq!(h.last(), 3);
        for k in 0..h.last() {
            let mut next = h.set(k);
            next.extend(vertex_boundary(&g, &h.set(k)).unwrap());
            next.sort_unstable();
            assert_eq!(next, h.set(k + 1));
            assert_eq!(h.sizes[k + 1], h.sizes[k] + h.boundary_sizes[k]);
        }
    }
}
