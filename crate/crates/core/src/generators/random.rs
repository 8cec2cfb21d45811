use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::geometry::{Ball, Packing};
use crate::graph::{Graph, VertexId};

/// Random connected graph: a random recursive tree plus each remaining pair
/// independently with probability `extra`.
pub fn random_connected_graph(n: usize, extra: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(invalid("graph needs at least 1 vertex"));
    }
    if !(0.0..=1.0).contains(&extra) {
        return Err(invalid("edge probability must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(extra) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges((0..n as VertexId).collect(), edges)
}

/// Random packing in `R^d` grown by attaching each new ball tangentially to an
/// earlier one, in a random direction, with radius drawn from `[0.5, 2)`.
///
/// Attachments that would overlap an existing ball are redrawn, so the result
/// has many tangencies and validates at its tolerance `1e-9`.
pub fn random_tangent_packing(d: usize, n: usize, seed: u64) -> Result<Packing> {
    if d == 0 || n == 0 {
        return Err(invalid("dimension and ball count must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut balls: Vec<Ball> = vec![Ball {
        id: 0,
        center: vec![0.0; d],
        radius: 1.0,
    }];
    let mut attempts = 0usize;
    while balls.len() < n {
        attempts += 1;
        if attempts > 1000 * n {
            return Err(invalid("could not place balls without overlap"));
        }
        let parent = &balls[rng.random_range(0..balls.len())];
        let radius = rng.random_range(0.5..2.0);
        let dir: Vec<f64> = loop {
            let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-3 && norm <= 1.0 {
                break v.into_iter().map(|x| x / norm).collect();
            }
        };
        let reach = parent.radius + radius;
        let center: Vec<f64> = parent.center.iter().zip(&dir).map(|(c, u)| c + reach * u).collect();
        // Keep a clear margin to every ball except the parent.
        let clear = balls.iter().all(|b| {
            let dist = b.center.iter().zip(&center).map(|(a, c)| (a - c).powi(2)).sum::<f64>().sqrt();
            dist >= (b.radius + radius) * (1.0 + 1e-6) || std::ptr::eq(b, parent)
        });
        if clear {
            balls.push(Ball {
                id: balls.len() as VertexId,
                center,
                radius,
            });
        }
    }
    Packing::new(d, balls, 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{tangency_graph, validate_packing};

    #[test]
    fn random_graphs_are_connected_and_seeded() {
        for seed in 0..10 {
            let g = random_connected_graph(8, 0.2, seed).unwrap();
            assert!(g.is_connected());
            assert_eq!(g, random_connected_graph(8, 0.2, seed).unwrap());
        }
    }

    #[test]
    fn random_packings_validate() {
        for d in 1..=3 {
            let p = random_tangent_packing(d, 30, d as u64).unwrap();
            assert!(validate_packing(&p).unwrap().pass);
            let g = tangency_graph(&p).unwrap();
            assert!(g.edge_count() >= 29, "a tangent tree at least");
        }
    }
}
