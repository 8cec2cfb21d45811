//! Finite ball packings in `R^d`: validation, tangency graphs, uniformity and
//! the supported-point census.

mod census;
pub mod io;
mod spatial;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, VertexId};

pub use census::{isolation_radius, is_supported, support_level, supported_census, SupportMode, SupportedCensus};

/// Default relative tolerance for inputs with exact coordinates.
pub const DEFAULT_TOL_REL: f64 = 1e-9;

/// Wider neighbourhood scanned by validation to report the smallest gap.
const GAP_SCAN_SLACK: f64 = 1.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub id: VertexId,
    pub center: Vec<f64>,
    pub radius: f64,
}

/// A finite list of balls in `R^dimension`.
///
/// Fields are public so that raw documents can be represented before they are
/// checked; [`validate_packing`] and everything built on it re-check structure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Packing {
    pub dimension: usize,
    pub balls: Vec<Ball>,
    pub tol_rel: f64,
}

impl Packing {
    /// Builds a packing after checking its structural invariants (not overlap).
    pub fn new(dimension: usize, balls: Vec<Ball>, tol_rel: f64) -> Result<Self> {
        let p = Self {
            dimension,
            balls,
            tol_rel,
        };
        p.check_structure()?;
        Ok(p)
    }

    /// Dimension, radii, coordinates, ids and tolerance, without any pair test.
    pub fn check_structure(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        if self.balls.is_empty() {
            return Err(invalid("packing has no balls"));
        }
        if !(self.tol_rel >= 0.0 && self.tol_rel < 1.0) {
            return Err(invalid("tol_rel must lie in [0, 1)"));
        }
        let mut ids = HashSet::with_capacity(self.balls.len());
        for (i, b) in self.balls.iter().enumerate() {
            if b.center.len() != self.dimension {
                return Err(invalid(format!(
                    "balls[{i}] (id {}): center has {} coordinates, dimension is {}",
                    b.id,
                    b.center.len(),
                    self.dimension
                )));
            }
            if !(b.radius > 0.0 && b.radius.is_finite()) {
                return Err(invalid(format!("balls[{i}] (id {}): radius must be positive and finite", b.id)));
            }
            if b.center.iter().any(|x| !x.is_finite()) {
                return Err(invalid(format!("balls[{i}] (id {}): non-finite coordinate", b.id)));
            }
            if !ids.insert(b.id) {
                return Err(invalid(format!("balls[{i}]: duplicate id {}", b.id)));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn centers(&self) -> Vec<Vec<f64>> {
        self.balls.iter().map(|b| b.center.clone()).collect()
    }

    fn radii(&self) -> Vec<f64> {
        self.balls.iter().map(|b| b.radius).collect()
    }

    /// Ball indices sorted by id: the vertex order of the tangency graph.
    fn id_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.balls.len()).collect();
        order.sort_unstable_by_key(|&i| self.balls[i].id);
        order
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Overlap {
    pub u: VertexId,
    pub v: VertexId,
    /// `(r_u + r_v) − |C_u − C_v|`.
    pub depth: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub pass: bool,
    pub overlaps: Vec<Overlap>,
    /// Smallest `|C_u − C_v| − (r_u + r_v)` over pairs with `|C_u − C_v| ≤ 2(r_u + r_v)`;
    /// `None` when no pair is that close.
    pub min_gap: Option<f64>,
    pub pairs_checked: usize,
}

/// Checks disjoint interiors: a pair overlaps when `|C_u − C_v| < (r_u + r_v)(1 − tol_rel)`.
pub fn validate_packing(p: &Packing) -> Result<ValidationReport> {
    p.check_structure()?;
    let centers = p.centers();
    let radii = p.radii();
    let pairs = spatial::close_pairs(&centers, &radii, GAP_SCAN_SLACK);
    let mut overlaps = Vec::new();
    let mut min_gap: Option<f64> = None;
    for &(u, v) in &pairs {
        let dist = spatial::distance(&centers[u], &centers[v]);
        let sum = radii[u] + radii[v];
        let gap = dist - sum;
        min_gap = Some(min_gap.map_or(gap, |g| g.min(gap)));
        if dist < sum * (1.0 - p.tol_rel) {
            let (a, b) = (p.balls[u].id, p.balls[v].id);
            overlaps.push(Overlap {
                u: a.min(b),
                v: a.max(b),
                depth: sum - dist,
            });
        }
    }
    overlaps.sort_by_key(|o| (o.u, o.v));
    Ok(ValidationReport {
        pass: overlaps.is_empty(),
        overlaps,
        min_gap,
        pairs_checked: pairs.len(),
    })
}

/// Tangency pairs as ball indices `(u, v)` with `u < v`.
fn tangent_pairs(p: &Packing) -> Result<Vec<(usize, usize)>> {
    let report = validate_packing(p)?;
    if !report.pass {
        return Err(Error::InvalidPacking(Box::new(report)));
    }
    let centers = p.centers();
    let radii = p.radii();
    Ok(spatial::close_pairs(&centers, &radii, p.tol_rel)
        .into_iter()
        .filter(|&(u, v)| {
            let sum = radii[u] + radii[v];
            (spatial::distance(&centers[u], &centers[v]) - sum).abs() <= p.tol_rel * sum
        })
        .collect())
}

/// Graph on the ball ids (vertices in increasing id order) with an edge for
/// every pair satisfying `| |C_u − C_v| − (r_u + r_v) | ≤ tol_rel (r_u + r_v)`.
pub fn tangency_graph(p: &Packing) -> Result<Graph> {
    let pairs = tangent_pairs(p)?;
    let order = p.id_order();
    let mut pos = vec![0; order.len()];
    for (k, &i) in order.iter().enumerate() {
        pos[i] = k;
    }
    let labels = order.iter().map(|&i| p.balls[i].id).collect();
    Graph::from_edges(labels, pairs.into_iter().map(|(u, v)| (pos[u], pos[v])))
}

/// Largest radius ratio across a tangency.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Uniformity {
    Value {
        m: f64,
        /// Ids of an attaining pair, smaller radius first.
        pair: (VertexId, VertexId),
    },
    NoTangencies,
}

impl Uniformity {
    pub fn value(&self) -> Option<f64> {
        match self {
            Uniformity::Value { m, .. } => Some(*m),
            Uniformity::NoTangencies => None,
        }
    }
}

pub fn uniformity_constant(p: &Packing) -> Result<Uniformity> {
    let pairs = tangent_pairs(p)?;
    let mut best: Option<(f64, (VertexId, VertexId))> = None;
    for (u, v) in pairs {
        let (a, b) = (&p.balls[u], &p.balls[v]);
        let (small, large) = if a.radius <= b.radius { (a, b) } else { (b, a) };
        let ratio = large.radius / small.radius;
        let key = (small.id, large.id);
        // Ties resolve to the smallest id pair for determinism.
        let replace = match best {
            None => true,
            Some((m, k)) => ratio > m || (ratio == m && key < k),
        };
        if replace {
            best = Some((ratio, key));
        }
    }
    Ok(best.map_or(Uniformity::NoTangencies, |(m, pair)| Uniformity::Value { m, pair }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub m: f64,
    pub dimension: usize,
    pub max_degree: usize,
    /// `(M (1 + 2M))^d`.
    pub bound: f64,
    pub pass: bool,
}

/// Compares the largest tangency degree with the volume bound `(M(1+2M))^d`.
///
/// `m` must be at least the packing's uniformity constant.
pub fn degree_bound_check(p: &Packing, m: f64) -> Result<DegreeReport> {
    if !(m >= 1.0 && m.is_finite()) {
        return Err(invalid("M must be finite and at least 1"));
    }
    if let Some(actual) = uniformity_constant(p)?.value() {
        if m < actual * (1.0 - 1e-12) {
            return Err(invalid(format!("M = {m} is below the packing's uniformity constant {actual}")));
        }
    }
    let g = tangency_graph(p)?;
    let bound = (m * (1.0 + 2.0 * m)).powi(p.dimension as i32);
    let max_degree = g.max_degree();
    Ok(DegreeReport {
        m,
        dimension: p.dimension,
        max_degree,
        bound,
        pass: max_degree as f64 <= bound,
    })
}

/// Applies `x ↦ (x − C_v)/r_v` so that ball `id` becomes the unit ball at the origin.
pub fn normalize_packing(p: &Packing, id: VertexId) -> Result<Packing> {
    p.check_structure()?;
    let anchor = p
        .balls
        .iter()
        .find(|b| b.id == id)
        .ok_or_else(|| invalid(format!("unknown ball id {id}")))?;
    let (c, r) = (anchor.center.clone(), anchor.radius);
    let balls = p
        .balls
        .iter()
        .map(|b| Ball {
            id: b.id,
            center: if b.id == id {
                vec![0.0; p.dimension]
            } else {
                b.center.iter().zip(&c).map(|(x, o)| (x - o) / r).collect()
            },
            radius: if b.id == id { 1.0 } else { b.radius / r },
        })
        .collect();
    Packing::new(p.dimension, balls, p.tol_rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cubic_lattice_packing, grid_graph, hexagonal_packing};

    fn two(dist: f64, r2: f64) -> Packing {
        Packing::new(
            3,
            vec![
                Ball { id: 0, center: vec![0.0; 3], radius: 1.0 },
                Ball { id: 1, center: vec![dist, 0.0, 0.0], radius: r2 },
            ],
            DEFAULT_TOL_REL,
        )
        .unwrap()
    }

    #[test]
    fn tangent_pair() {
        let p = two(2.0, 1.0);
        let r = validate_packing(&p).unwrap();
        assert!(r.pass);
        assert_eq!(r.min_gap, Some(0.0));
        assert_eq!(tangency_graph(&p).unwrap().edge_count(), 1);
    }

    #[test]
    fn overlapping_pair_is_listed() {
        let p = two(1.5, 1.0);
        let r = validate_packing(&p).unwrap();
        assert!(!r.pass);
        assert_eq!(r.overlaps, vec![Overlap { u: 0, v: 1, depth: 0.5 }]);
        assert!(matches!(tangency_graph(&p), Err(Error::InvalidPacking(_))));
    }

    #[test]
    fn separated_pair_has_no_edge() {
        assert_eq!(tangency_graph(&two(2.5, 1.0)).unwrap().edge_count(), 0);
        assert_eq!(uniformity_constant(&two(2.5, 1.0)).unwrap(), Uniformity::NoTangencies);
    }

    #[test]
    fn uniformity_of_unequal_pair() {
        let u = uniformity_constant(&two(3.0, 2.0)).unwrap();
        assert_eq!(u, Uniformity::Value { m: 2.0, pair: (0, 1) });
    }

    #[test]
    fn structural_errors() {
        let mut p = two(2.0, 1.0);
        p.balls[1].center.pop();
        assert!(validate_packing(&p).is_err());
        let mut q = two(2.0, 1.0);
        q.balls[1].id = 0;
        assert!(validate_packing(&q).is_err());
    }

    #[test]
    fn lattice_tangency_is_grid() {
        for d in 1..=3 {
            let p = cubic_lattice_packing(d, 4).unwrap();
            assert_eq!(tangency_graph(&p).unwrap(), grid_graph(d, 4).unwrap());
        }
    }

    #[test]
    fn degree_bounds() {
        let r = degree_bound_check(&cubic_lattice_packing(3, 4).unwrap(), 1.0).unwrap();
        assert_eq!((r.max_degree, r.bound), (6, 27.0));
        let h = degree_bound_check(&hexagonal_packing(5, 5).unwrap(), 1.0).unwrap();
        assert_eq!((h.max_degree, h.bound), (6, 9.0));
        assert!(degree_bound_check(&two(3.0, 2.0), 1.5).is_err());
    }

    #[test]
    fn normalize_example() {
        let p = Packing::new(
            2,
            vec![
                Ball { id: 5, center: vec![4.0, 0.0], radius: 2.0 },
                Ball { id: 6, center: vec![7.0, 0.0], radius: 1.0 },
            ],
            DEFAULT_TOL_REL,
        )
        .unwrap();
        let q = normalize_packing(&p, 5).unwrap();
        assert_eq!(q.balls[0].center, vec![0.0, 0.0]);
        assert_eq!(q.balls[0].radius, 1.0);
        assert_eq!(q.balls[1].center, vec![1.5, 0.0]);
        assert_eq!(q.balls[1].radius, 0.5);
        assert_eq!(normalize_packing(&q, 5).unwrap(), q);
        assert!(normalize_packing(&p, 9).is_err());
    }
}
