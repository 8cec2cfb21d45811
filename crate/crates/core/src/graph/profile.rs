use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::{hull_sequence, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub k: usize,
    pub size: usize,
    pub boundary: usize,
}

/// Hull-sequence growth table with the fitted exponent of `|∂W_k| ≈ c |W_k|^α`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsoProfile {
    pub rows: Vec<ProfileRow>,
    /// Inclusive range of `k` used by the fit.
    pub window: (usize, usize),
    /// `None` when the window holds fewer than two distinct sizes.
    pub alpha: Option<f64>,
}

/// Largest `k` before the hull meets a vertex of below-maximum degree.
fn bulk_radius(g: &Graph, o: usize) -> usize {
    let max_deg = g.max_degree();
    let dist = g.bfs_distances(&[o]);
    dist.iter()
        .enumerate()
        .filter_map(|(v, d)| d.filter(|_| g.degree(v) < max_deg))
        .min()
        .unwrap_or_else(|| dist.iter().flatten().copied().max().unwrap_or(0))
}

/// Fits `log |∂W_k|` against `log n_k` over the middle two quartiles of `k = 0..=K`.
///
/// With `max_k = None`, `K` is the hop distance from `o` to the nearest vertex
/// whose degree is below the maximum, which trims the saturation of finite boxes
/// and truncated trees.
pub fn iso_profile(g: &Graph, o: usize, max_k: Option<usize>) -> Result<IsoProfile> {
    g.check_vertex(o)?;
    let k = max_k.unwrap_or_else(|| bulk_radius(g, o));
    let hull = hull_sequence(g, o, Some(k))?;
    let rows: Vec<ProfileRow> = (0..hull.len())
        .map(|k| ProfileRow {
            k,
            size: hull.sizes[k],
            boundary: hull.boundary_sizes[k],
        })
        .collect();
    let last = hull.last();
    let window = (last / 4, (3 * last).div_ceil(4));
    let pts: Vec<(f64, f64)> = rows[window.0..=window.1]
        .iter()
        .filter(|r| r.boundary > 0)
        .map(|r| ((r.size as f64).ln(), (r.boundary as f64).ln()))
        .collect();
    Ok(IsoProfile {
        rows,
        window,
        alpha: least_squares_slope(&pts),
    })
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 1e-12).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{grid_graph, regular_tree};

    #[test]
    fn z2_exponent_near_one_half() {
        let g = grid_graph(2, 41).unwrap();
        let p = iso_profile(&g, 20 * 41 + 20, None).unwrap();
        assert_eq!(p.rows.len(), 21);
        let a = p.alpha.unwrap();
        assert!((a - 0.5).abs() < 0.1, "alpha = {a}");
    }

    #[test]
    fn tree_exponent_near_one() {
        let g = regular_tree(3, 10).unwrap();
        let a = iso_profile(&g, 0, None).unwrap().alpha.unwrap();
        assert!(a > 0.9, "alpha = {a}");
    }

    #[test]
    fn degenerate_sequence_has_no_fit() {
        let g = grid_graph(1, 2).unwrap();
        let p = iso_profile(&g, 0, None).unwrap();
        assert!(p.alpha.is_none());
        assert!(!p.rows.is_empty());
    }
}
