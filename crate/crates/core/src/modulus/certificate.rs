use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{hull_sequence, Graph};

use super::{Profile, VertexMetric, MIN_P};

/// Weight given to the root layer `{o}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootWeight {
    /// `g(n_0)^{-1/(p-1)}`, the same rule as the boundary layers.
    Profile,
    /// The root carries no weight.
    Zero,
}

/// Layer metric built from the hull sequence and the resulting lower bound
/// on the extremal length of paths from `o` to the sphere at distance `N + 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub p: f64,
    pub n: usize,
    /// `|{o}|` followed by `|∂W_0|, …, |∂W_N|`.
    pub layer_sizes: Vec<usize>,
    /// Weight of each layer, aligned with `layer_sizes`.
    pub weights: Vec<f64>,
    pub metric: VertexMetric,
    /// `Σ` of the layer weights: a lower bound on every path length.
    pub length: f64,
    /// `Σ_v m(v)^p`.
    pub energy: f64,
    /// `length^p / energy`.
    pub bound: f64,
}

/// Puts weight `g(n_k)^{-1/(p-1)}` on every vertex of `∂W_k` for `k ≤ N`.
///
/// A path from `o` to distance `N + 1` meets `{o}` and each `∂W_k`, `k ≤ N`,
/// so its length is at least the sum of the layer weights and
/// `(Σ weights)^p / Σ_v m(v)^p` bounds the extremal length from below.
pub fn vel_certificate(g: &Graph, o: usize, profile: &Profile, n: usize, p: f64, root: RootWeight) -> Result<Certificate> {
    if !(p >= MIN_P && p.is_finite()) {
        return Err(invalid(format!("p must be finite and at least {MIN_P}")));
    }
    let hull = hull_sequence(g, o, Some(n))?;
    if hull.last() < n || hull.boundary_sizes[n] == 0 {
        return Err(invalid(format!(
            "the hull from vertex {} is exhausted before layer {}",
            g.label(o),
            n + 1
        )));
    }
    profile.check_positive(hull.sizes.iter().copied())?;
    let exp = -1.0 / (p - 1.0);
    let mut layer_sizes = vec![1];
    let mut weights = vec![match root {
        RootWeight::Profile => profile.eval(hull.sizes[0] as f64).powf(exp),
        RootWeight::Zero => 0.0,
    }];
    for k in 0..=n {
        layer_sizes.push(hull.boundary_sizes[k]);
        weights.push(profile.eval(hull.sizes[k] as f64).powf(exp));
    }
    let mut m = vec![0.0; g.len()];
    for (v, d) in hull.depth.iter().enumerate() {
        if let Some(d) = *d {
            if d <= n + 1 {
                m[v] = weights[d];
            }
        }
    }
    let length: f64 = weights.iter().sum();
    let energy: f64 = layer_sizes.iter().zip(&weights).map(|(&s, &w)| s as f64 * w.powf(p)).sum();
    Ok(Certificate {
        p,
        n,
        layer_sizes,
        weights,
        metric: VertexMetric::new(m)?,
        length,
        energy,
        bound: length.powf(p) / energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::grid_graph;
    use crate::modulus::{modulus, path_length, Connector, ModulusOptions};

    #[test]
    fn path_graph_is_tight() {
        for &p in &[2.0, 3.0] {
            let g = grid_graph(1, 8).unwrap();
            let cert = vel_certificate(&g, 0, &Profile::constant(1.0), 6, p, RootWeight::Profile).unwrap();
            assert_eq!(cert.layer_sizes, vec![1; 8]);
            let exact = 8f64.powf(p - 1.0);
            assert!((cert.bound - exact).abs() < 1e-9 * exact);
            let c = Connector::new(&g, vec![0], vec![7]).unwrap();
            let r = modulus(&c, &ModulusOptions::new(p)).unwrap();
            assert!((1.0 / r.value - cert.bound).abs() < 1e-6 * exact);
        }
    }

    #[test]
    fn single_layer_case() {
        let g = grid_graph(2, 5).unwrap();
        let cert = vel_certificate(&g, 12, &Profile::constant(2.0), 0, 2.0, RootWeight::Profile).unwrap();
        assert_eq!(cert.layer_sizes, vec![1, 4]);
        // Weights 1/2 each: length 1, energy 5/4.
        assert!((cert.bound - 0.8).abs() < 1e-12);
        let zero = vel_certificate(&g, 12, &Profile::constant(2.0), 0, 2.0, RootWeight::Zero).unwrap();
        assert!((zero.bound - 0.25).abs() < 1e-12);
    }

    #[test]
    fn metric_lengths_meet_the_bound() {
        let g = grid_graph(2, 9).unwrap();
        let cert = vel_certificate(&g, 40, &Profile::power(4.0, 0.5), 2, 2.0, RootWeight::Profile).unwrap();
        // A straight path from the centre to distance 3.
        let len = path_length(&g, &cert.metric, &[40, 41, 42, 43]).unwrap();
        assert!((len - cert.length).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let g = grid_graph(1, 3).unwrap();
        assert!(vel_certificate(&g, 0, &Profile::constant(1.0), 2, 2.0, RootWeight::Profile).is_err());
        assert!(vel_certificate(&g, 0, &Profile::constant(0.0), 0, 2.0, RootWeight::Profile).is_err());
    }
}
