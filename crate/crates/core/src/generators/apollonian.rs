use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::{Ball, Packing};
use crate::graph::VertexId;

/// Deepest supported recursion; the circle count grows like `2·3^depth`.
pub const MAX_DEPTH: usize = 12;

/// Tolerance attached to the exported packing.
const ITERATED_TOL: f64 = 1e-6;

/// A circle given by signed curvature (negative for the enclosing circle) and centre.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub curvature: f64,
    pub center: [f64; 2],
}

impl Circle {
    pub fn radius(&self) -> f64 {
        1.0 / self.curvature.abs()
    }
}

/// Circles of a recursively filled Apollonian gasket.
///
/// Index 0 is the enclosing unit circle with curvature −1. Every quadruple
/// lists four mutually tangent circles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApollonianGasket {
    pub depth: usize,
    pub circles: Vec<Circle>,
    pub quadruples: Vec<[usize; 4]>,
}

/// Relative residual of the curvature relation `(Σk)² = 2Σk²` together with its
/// complex-centre counterpart `(Σkz)² = 2Σ(kz)²`, whichever is larger.
pub fn descartes_residual(c: [&Circle; 4]) -> f64 {
    let ks: Vec<f64> = c.iter().map(|c| c.curvature).collect();
    let sum: f64 = ks.iter().sum();
    let sq: f64 = ks.iter().map(|k| k * k).sum();
    let real = (sum * sum - 2.0 * sq).abs() / sq;

    // Complex arithmetic on (re, im) pairs.
    let kz: Vec<(f64, f64)> = c.iter().map(|c| (c.curvature * c.center[0], c.curvature * c.center[1])).collect();
    let (sr, si) = kz.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (qr, qi) = kz.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x * x - y * y, b + 2.0 * x * y));
    let lhs = (sr * sr - si * si, 2.0 * sr * si);
    let diff = ((lhs.0 - 2.0 * qr).powi(2) + (lhs.1 - 2.0 * qi).powi(2)).sqrt();
    let scale: f64 = kz.iter().map(|&(x, y)| x * x + y * y).sum::<f64>() + sq;
    real.max(diff / scale)
}

impl ApollonianGasket {
    /// Inner circles as a packing with ids equal to circle indices (the enclosing circle is left out).
    pub fn packing(&self) -> Packing {
        let balls = self
            .circles
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| Ball {
                id: i as VertexId,
                center: c.center.to_vec(),
                radius: c.radius(),
            })
            .collect();
        Packing::new(2, balls, ITERATED_TOL).expect("generated circles are well formed")
    }

    /// Pairs of inner circles that are tangent by construction, `(i, j)` with `i < j`.
    pub fn tangent_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = BTreeSet::new();
        for q in &self.quadruples {
            for a in 0..4 {
                for b in a + 1..4 {
                    let (i, j) = (q[a].min(q[b]), q[a].max(q[b]));
                    if i != 0 {
                        pairs.insert((i, j));
                    }
                }
            }
        }
        pairs.into_iter().collect()
    }

    pub fn max_descartes_residual(&self) -> f64 {
        self.quadruples
            .iter()
            .map(|q| descartes_residual(q.map(|i| &self.circles[i])))
            .fold(0.0, f64::max)
    }
}

/// Gasket grown from curvatures (−1, 2, 2, 3): the unit circle, two circles of
/// radius 1/2 at `(±1/2, 0)` and one of radius 1/3 at `(0, 2/3)`.
///
/// Each level fills every open curvilinear triangle by reflecting the fourth
/// circle of its quadruple: `k' = 2(k1+k2+k3) − k4` and likewise for `k·z`.
/// Depth 0 is the initial configuration; depth `D` holds `4 + 2(3^D − 1)` circles.
pub fn apollonian_gasket(depth: usize) -> Result<ApollonianGasket> {
    if depth > MAX_DEPTH {
        return Err(invalid(format!("apollonian depth {depth} exceeds {MAX_DEPTH}")));
    }
    let mut circles = vec![
        Circle { curvature: -1.0, center: [0.0, 0.0] },
        Circle { curvature: 2.0, center: [-0.5, 0.0] },
        Circle { curvature: 2.0, center: [0.5, 0.0] },
        Circle { curvature: 3.0, center: [0.0, 2.0 / 3.0] },
    ];
    let mut quadruples = vec![[0, 1, 2, 3]];
    // (quadruple index, slot holding the circle that must not be reflected back)
    let mut frontier: Vec<(usize, Option<usize>)> = vec![(0, None)];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(frontier.len() * 3);
        for &(qi, fresh) in &frontier {
            let q = quadruples[qi];
            for slot in 0..4 {
                if Some(slot) == fresh {
                    continue;
                }
                let old = circles[q[slot]];
                let (mut k, mut x, mut y) = (-old.curvature, -old.curvature * old.center[0], -old.curvature * old.center[1]);
                for (s, &ci) in q.iter().enumerate() {
                    if s != slot {
                        let c = &circles[ci];
                        k += 2.0 * c.curvature;
                        x += 2.0 * c.curvature * c.center[0];
                        y += 2.0 * c.curvature * c.center[1];
                    }
                }
                circles.push(Circle { curvature: k, center: [x / k, y / k] });
                let mut nq = q;
                nq[slot] = circles.len() - 1;
                quadruples.push(nq);
                next.push((quadruples.len() - 1, Some(slot)));
            }
        }
        frontier = next;
    }
    Ok(ApollonianGasket { depth, circles, quadruples })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_counts() {
        for d in 0..5 {
            let g = apollonian_gasket(d).unwrap();
            assert_eq!(g.circles.len(), 4 + 2 * (3usize.pow(d as u32) - 1));
        }
    }

    #[test]
    fn first_level_curvatures() {
        let g = apollonian_gasket(1).unwrap();
        let mut ks: Vec<f64> = g.circles[4..].iter().map(|c| c.curvature).collect();
        ks.sort_by(f64::total_cmp);
        assert_eq!(ks, vec![3.0, 6.0, 6.0, 15.0]);
        // The reflection of the top circle is its mirror image.
        let bottom = g.circles[4..].iter().find(|c| c.curvature == 3.0).unwrap();
        assert!((bottom.center[1] + 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn descartes_identity_holds() {
        let g = apollonian_gasket(5).unwrap();
        assert!(g.max_descartes_residual() < 1e-9);
    }

    #[test]
    fn tangent_pairs_touch() {
        let g = apollonian_gasket(3).unwrap();
        for (i, j) in g.tangent_pairs() {
            let (a, b) = (&g.circles[i], &g.circles[j]);
            let d = ((a.center[0] - b.center[0]).powi(2) + (a.center[1] - b.center[1]).powi(2)).sqrt();
            assert!((d - a.radius() - b.radius()).abs() < 1e-9 * (a.radius() + b.radius()));
        }
    }
}
