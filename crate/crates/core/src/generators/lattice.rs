use crate::error::{invalid, Result};
use crate::geometry::{Ball, Packing};
use crate::graph::{Graph, VertexId};

/// Tolerance attached to generated packings with exact coordinates.
const EXACT_TOL: f64 = 1e-9;

fn lattice_size(d: usize, side: usize) -> Result<usize> {
    if d == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    if side < 2 {
        return Err(invalid("side must be at least 2"));
    }
    (0..d)
        .try_fold(1usize, |acc, _| acc.checked_mul(side))
        .filter(|&n| n <= 1 << 28)
        .ok_or_else(|| invalid(format!("lattice {side}^{d} is too large")))
}

fn coords(mut v: usize, d: usize, side: usize) -> Vec<usize> {
    (0..d)
        .map(|_| {
            let c = v % side;
            v /= side;
            c
        })
        .collect()
}

/// Grid graph on `{0..side-1}^d`.
pub fn grid_graph(d: usize, side: usize) -> Result<Graph> {
    let n = lattice_size(d, side)?;
    let mut edges = Vec::with_capacity(d * n);
    for v in 0..n {
        let mut stride = 1;
        for c in coords(v, d, side) {
            if c + 1 < side {
                edges.push((v, v + stride));
            }
            stride *= side;
        }
    }
    Graph::from_edges((0..n as VertexId).collect(), edges)
}

/// Balls of radius 1/2 centred at the integer points of `{0..side-1}^d`.
pub fn cubic_lattice_packing(d: usize, side: usize) -> Result<Packing> {
    let n = lattice_size(d, side)?;
    let balls = (0..n)
        .map(|v| Ball {
            id: v as VertexId,
            center: coords(v, d, side).into_iter().map(|c| c as f64).collect(),
            radius: 0.5,
        })
        .collect();
    Packing::new(d, balls, EXACT_TOL)
}

/// Unit circles on a `rows x cols` patch of the triangular lattice.
///
/// Ball `i * cols + j` sits at `(2j + (i mod 2), i√3)`.
pub fn hexagonal_packing(rows: usize, cols: usize) -> Result<Packing> {
    if rows == 0 || cols == 0 {
        return Err(invalid("rows and cols must be at least 1"));
    }
    let h = 3f64.sqrt();
    let balls = (0..rows)
        .flat_map(|i| {
            (0..cols).map(move |j| Ball {
                id: (i * cols + j) as VertexId,
                center: vec![(2 * j + i % 2) as f64, i as f64 * h],
                radius: 1.0,
            })
        })
        .collect();
    Packing::new(2, balls, EXACT_TOL)
}

/// The `k`-regular tree truncated at `depth`, root `0`, vertices numbered breadth-first.
///
/// The root has `k` children and every other internal vertex `k - 1`.
pub fn regular_tree(k: usize, depth: usize) -> Result<Graph> {
    if k < 2 {
        return Err(invalid("tree degree must be at least 2"));
    }
    let mut total: usize = 1;
    let mut layer: usize = 1;
    for level in 0..depth {
        layer = layer
            .checked_mul(if level == 0 { k } else { k - 1 })
            .ok_or_else(|| invalid("tree too large"))?;
        total = total.checked_add(layer).filter(|&t| t <= 1 << 26).ok_or_else(|| invalid("tree too large"))?;
    }
    let mut edges = Vec::with_capacity(total.saturating_sub(1));
    let mut next = 1;
    let mut frontier = vec![0usize];
    for level in 0..depth {
        let children = if level == 0 { k } else { k - 1 };
        let mut new_frontier = Vec::with_capacity(frontier.len() * children);
        for &parent in &frontier {
            for _ in 0..children {
                edges.push((parent, next));
                new_frontier.push(next);
                next += 1;
            }
        }
        frontier = new_frontier;
    }
    Graph::from_edges((0..total as VertexId).collect(), edges)
}

pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(invalid("a cycle needs at least 3 vertices"));
    }
    Graph::from_edges((0..n as VertexId).collect(), (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn complete_graph(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(invalid("complete graph needs at least 1 vertex"));
    }
    Graph::from_edges(
        (0..n as VertexId).collect(),
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_edge_counts() {
        assert_eq!(grid_graph(2, 3).unwrap().edge_count(), 12);
        assert_eq!(grid_graph(2, 4).unwrap().edge_count(), 24);
        assert_eq!(grid_graph(3, 3).unwrap().edge_count(), 54);
        let p = grid_graph(1, 5).unwrap();
        assert_eq!(p.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert!(grid_graph(2, 1).is_err());
    }

    #[test]
    fn tree_sizes() {
        assert_eq!(regular_tree(3, 2).unwrap().len(), 10);
        assert_eq!(regular_tree(3, 0).unwrap().len(), 1);
        let t = regular_tree(4, 3).unwrap();
        assert_eq!(t.len(), 1 + 4 + 12 + 36);
        assert_eq!(t.degree(0), 4);
        assert_eq!(t.degree(1), 4);
        assert_eq!(t.edge_count(), t.len() - 1);
    }

    #[test]
    fn small_families() {
        assert_eq!(cycle_graph(8).unwrap().edge_count(), 8);
        assert_eq!(complete_graph(5).unwrap().edge_count(), 10);
        assert_eq!(cubic_lattice_packing(3, 2).unwrap().balls.len(), 8);
        let hex = hexagonal_packing(2, 3).unwrap();
        assert_eq!(hex.balls[4].center, vec![3.0, 3f64.sqrt()]);
    }
}
