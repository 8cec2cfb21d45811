//! Independent brute-force modulus for small connectors.
//!
//! All minimal source-to-target paths are enumerated (a path whose interior
//! avoids `S ∪ T`; every other path contains one, so the constraint sets agree)
//! and the full convex program is solved by a primal log-barrier Newton method.

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};

use super::Connector;

/// Largest path family the oracle will materialise.
pub const ORACLE_PATH_LIMIT: usize = 100_000;

/// Every simple path from a source to a target whose interior avoids both sets.
pub fn minimal_paths(c: &Connector) -> Result<Vec<Vec<usize>>> {
    let g = c.graph;
    let is_source = c.source_mask();
    let is_target = c.target_mask();
    let mut out = Vec::new();
    let mut on_path = vec![false; g.len()];
    for &s in &c.source {
        // Iterative DFS over (vertex, next neighbour position).
        let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
        let mut path = vec![s];
        on_path[s] = true;
        while let Some(top) = stack.last_mut() {
            let (v, pos) = *top;
            if let Some(&w) = g.neighbors(v).get(pos) {
                top.1 += 1;
                if on_path[w] || is_source[w] {
                    continue;
                }
                if is_target[w] {
                    let mut p = path.clone();
                    p.push(w);
                    out.push(p);
                    if out.len() > ORACLE_PATH_LIMIT {
                        return Err(Error::LimitExceeded {
                            what: "oracle path count",
                            limit: ORACLE_PATH_LIMIT,
                            actual: out.len(),
                        });
                    }
                    continue;
                }
                on_path[w] = true;
                path.push(w);
                stack.push((w, 0));
            } else {
                stack.pop();
                on_path[v] = false;
                path.pop();
            }
        }
    }
    Ok(out)
}

/// Full-family `p`-modulus to about ten significant digits; 0 when disconnected.
pub fn modulus_oracle(c: &Connector, p: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(invalid("p must be finite and greater than 1"));
    }
    let paths = minimal_paths(c)?;
    if paths.is_empty() {
        return Ok(0.0);
    }
    // Only vertices on some path carry weight.
    let mut local = vec![usize::MAX; c.graph.len()];
    let mut k = 0;
    for path in &paths {
        for &v in path {
            if local[v] == usize::MAX {
                local[v] = k;
                k += 1;
            }
        }
    }
    let rows: Vec<Vec<usize>> = paths.iter().map(|p| p.iter().map(|&v| local[v]).collect()).collect();
    let barrier = Barrier { rows: &rows, p, k };
    Ok(barrier.solve())
}

struct Barrier<'a> {
    rows: &'a [Vec<usize>],
    p: f64,
    k: usize,
}

impl Barrier<'_> {
    /// `t Σ m^p − Σ log(A m − 1) − Σ log m`, or `None` outside the domain.
    fn phi(&self, t: f64, m: &DVector<f64>) -> Option<f64> {
        if m.iter().any(|&x| x <= 0.0) {
            return None;
        }
        let mut val = t * m.iter().map(|x| x.powf(self.p)).sum::<f64>() - m.iter().map(|x| x.ln()).sum::<f64>();
        for r in self.rows {
            let s = r.iter().map(|&i| m[i]).sum::<f64>() - 1.0;
            if s <= 0.0 {
                return None;
            }
            val -= s.ln();
        }
        Some(val)
    }

    fn solve(&self) -> f64 {
        let (k, p) = (self.k, self.p);
        let mut m: DVector<f64> = DVector::from_element(k, 1.0);
        let constraints = (self.rows.len() + k) as f64;
        let mut t: f64 = 1.0;
        loop {
            for _ in 0..200 {
                let mut grad = DVector::from_fn(k, |i, _| t * p * m[i].powf(p - 1.0) - 1.0 / m[i]);
                let mut hess = DMatrix::from_fn(k, k, |i, j| {
                    if i == j {
                        t * p * (p - 1.0) * m[i].powf(p - 2.0) + 1.0 / (m[i] * m[i])
                    } else {
                        0.0
                    }
                });
                for r in self.rows {
                    let s = r.iter().map(|&i| m[i]).sum::<f64>() - 1.0;
                    for &a in r {
                        grad[a] -= 1.0 / s;
                        for &b in r {
                            hess[(a, b)] += 1.0 / (s * s);
                        }
                    }
                }
                let Some(chol) = hess.cholesky() else { break };
                let step = chol.solve(&(-&grad));
                let decrement = -grad.dot(&step);
                if decrement <= 1e-20 {
                    break;
                }
                let f0 = self.phi(t, &m).expect("iterate is interior");
                let mut alpha = 1.0;
                let accepted = loop {
                    let trial = &m + alpha * &step;
                    if let Some(f) = self.phi(t, &trial) {
                        if f <= f0 - 0.25 * alpha * decrement {
                            break Some(trial);
                        }
                    }
                    alpha *= 0.5;
                    if alpha < 1e-20 {
                        break None;
                    }
                };
                match accepted {
                    Some(next) => m = next,
                    None => break,
                }
                if decrement <= 1e-14 {
                    break;
                }
            }
            let value: f64 = m.iter().map(|x| x.powf(p)).sum();
            if constraints / t <= 1e-12 * value {
                return value;
            }
            t *= 8.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, grid_graph};
    use crate::graph::Graph;

    #[test]
    fn path_graph_value() {
        let g = grid_graph(1, 5).unwrap();
        let c = Connector::new(&g, vec![0], vec![4]).unwrap();
        assert!((modulus_oracle(&c, 2.0).unwrap() - 0.2).abs() < 1e-10);
        assert!((modulus_oracle(&c, 3.0).unwrap() - 0.04).abs() < 1e-10);
    }

    #[test]
    fn disconnected_is_zero() {
        let g = Graph::with_vertices(2);
        let c = Connector::new(&g, vec![0], vec![1]).unwrap();
        assert_eq!(modulus_oracle(&c, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn minimal_paths_of_k4() {
        let g = complete_graph(4).unwrap();
        let c = Connector::new(&g, vec![0], vec![3]).unwrap();
        // 0-3, 0-1-3, 0-2-3, 0-1-2-3, 0-2-1-3.
        assert_eq!(minimal_paths(&c).unwrap().len(), 5);
        let c2 = Connector::new(&g, vec![0, 1], vec![3]).unwrap();
        // Interiors must avoid the sources: 0-3, 0-2-3, 1-3, 1-2-3.
        assert_eq!(minimal_paths(&c2).unwrap().len(), 4);
    }
}
