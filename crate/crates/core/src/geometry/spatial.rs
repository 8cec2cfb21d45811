//! Uniform-grid spatial hashing on up to three coordinates.

use std::collections::HashMap;

/// Coordinates beyond this many are not hashed (they are still compared exactly).
const HASHED_DIMS: usize = 3;

/// Radius spread above which balls are split into per-scale bands.
pub const BAND_SPREAD: f64 = 1e4;

type Cell = [i64; HASHED_DIMS];

fn cell_of(p: &[f64], size: f64) -> Cell {
    let mut c = [0i64; HASHED_DIMS];
    for (slot, &x) in c.iter_mut().zip(p) {
        *slot = (x / size).floor() as i64;
    }
    c
}

/// Calls `f` for every cell of the `3^k` block around `c` (`k` = hashed dimensions).
fn for_each_neighbor_cell(c: Cell, dims: usize, mut f: impl FnMut(Cell)) {
    let k = dims.min(HASHED_DIMS);
    let count = 3usize.pow(k as u32);
    for code in 0..count {
        let mut cell = c;
        let mut rem = code;
        for slot in cell.iter_mut().take(k) {
            *slot += (rem % 3) as i64 - 1;
            rem /= 3;
        }
        f(cell);
    }
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// All index pairs `(u, v)`, `u < v`, with `|c_u − c_v| ≤ (r_u + r_v)(1 + slack)`.
///
/// Each radius band `⌊log2 r⌋` (a single band when the spread is at most
/// [`BAND_SPREAD`]) gets its own grid with cell size `2 r_max (1 + slack)`;
/// a ball is queried against the grids of its own band and every larger one.
pub(crate) fn close_pairs(centers: &[Vec<f64>], radii: &[f64], slack: f64) -> Vec<(usize, usize)> {
    let n = radii.len();
    if n < 2 {
        return Vec::new();
    }
    let dims = centers[0].len();
    let (rmin, rmax) = radii.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    let banded = rmax / rmin > BAND_SPREAD;
    let band_of = |r: f64| if banded { r.log2().floor() as i64 } else { 0 };

    let mut bands: Vec<i64> = radii.iter().map(|&r| band_of(r)).collect();
    bands.sort_unstable();
    bands.dedup();
    struct Grid {
        size: f64,
        cells: HashMap<Cell, Vec<usize>>,
    }
    let mut grids: Vec<Grid> = bands
        .iter()
        .map(|&b| {
            let rm = radii.iter().filter(|&&r| band_of(r) == b).fold(0.0f64, |a, &r| a.max(r));
            Grid {
                size: 2.0 * rm * (1.0 + slack),
                cells: HashMap::new(),
            }
        })
        .collect();
    let band_index = |r: f64| bands.binary_search(&band_of(r)).expect("band exists");
    for v in 0..n {
        let g = &mut grids[band_index(radii[v])];
        let c = cell_of(&centers[v], g.size);
        g.cells.entry(c).or_default().push(v);
    }

    let mut out = Vec::new();
    for u in 0..n {
        let own = band_index(radii[u]);
        for (bi, g) in grids.iter().enumerate().skip(own) {
            let c = cell_of(&centers[u], g.size);
            for_each_neighbor_cell(c, dims, |cell| {
                if let Some(list) = g.cells.get(&cell) {
                    for &v in list {
                        let keep = if bi == own { v > u } else { true };
                        if keep && distance(&centers[u], &centers[v]) <= (radii[u] + radii[v]) * (1.0 + slack) {
                            out.push((u.min(v), u.max(v)));
                        }
                    }
                }
            });
        }
    }
    out.sort_unstable();
    out
}

/// Grid over a point set for radius and nearest-neighbour queries.
pub(crate) struct PointGrid<'a> {
    points: &'a [Vec<f64>],
    size: f64,
    cells: HashMap<Cell, Vec<usize>>,
    dims: usize,
    diameter: f64,
}

impl<'a> PointGrid<'a> {
    /// Cell size is the mean spacing of the points over their bounding box.
    pub fn new(points: &'a [Vec<f64>]) -> Self {
        let dims = points.first().map_or(0, Vec::len);
        let k = dims.min(HASHED_DIMS);
        let mut lo = vec![f64::INFINITY; dims];
        let mut hi = vec![f64::NEG_INFINITY; dims];
        for p in points {
            for i in 0..dims {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        let diameter = (0..dims).map(|i| (hi[i] - lo[i]).powi(2)).sum::<f64>().sqrt();
        let extent: Vec<f64> = (0..k).map(|i| hi[i] - lo[i]).collect();
        let n = points.len().max(1) as f64;
        let max_extent = extent.iter().copied().fold(0.0, f64::max);
        let vol: f64 = extent.iter().map(|e| e.max(max_extent / n)).product();
        let mut size = (vol / n).powf(1.0 / k.max(1) as f64);
        if !(size > 0.0 && size.is_finite()) {
            size = if diameter > 0.0 { diameter } else { 1.0 };
        }
        let mut cells: HashMap<Cell, Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            cells.entry(cell_of(p, size)).or_default().push(i);
        }
        Self {
            points,
            size,
            cells,
            dims,
            diameter,
        }
    }

    /// Indices of points with `|p − c| ≤ r`, in increasing order.
    pub fn within(&self, c: &[f64], r: f64) -> Vec<usize> {
        let k = self.dims.min(HASHED_DIMS);
        let span = (r / self.size).ceil() as i64 + 1;
        let block = (2 * span + 1) as f64;
        let mut out = Vec::new();
        if block.powi(k as i32) > self.points.len() as f64 {
            out.extend((0..self.points.len()).filter(|&i| distance(&self.points[i], c) <= r));
            return out;
        }
        let base = cell_of(c, self.size);
        let mut offset = vec![-span; k];
        loop {
            let mut cell = base;
            for i in 0..k {
                cell[i] += offset[i];
            }
            if let Some(list) = self.cells.get(&cell) {
                out.extend(list.iter().copied().filter(|&i| distance(&self.points[i], c) <= r));
            }
            // Odometer increment over the block.
            let mut i = 0;
            while i < k {
                offset[i] += 1;
                if offset[i] <= span {
                    break;
                }
                offset[i] = -span;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        out.sort_unstable();
        out
    }

    /// Distance from point `w` to its nearest other point, `None` when there is none.
    pub fn nearest_other(&self, w: usize) -> Option<f64> {
        if self.points.len() < 2 {
            return None;
        }
        let c = &self.points[w];
        let mut r = self.size;
        loop {
            let best = self
                .within(c, r)
                .into_iter()
                .filter(|&i| i != w)
                .map(|i| distance(&self.points[i], c))
                .fold(f64::INFINITY, f64::min);
            if best.is_finite() {
                return Some(best);
            }
            if r > self.diameter {
                return Some(best);
            }
            r *= 2.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(centers: &[Vec<f64>], radii: &[f64], slack: f64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..radii.len() {
            for v in u + 1..radii.len() {
                if distance(&centers[u], &centers[v]) <= (radii[u] + radii[v]) * (1.0 + slack) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    #[test]
    fn close_pairs_match_brute_force() {
        let mut centers = Vec::new();
        let mut radii = Vec::new();
        let mut x = 0.37f64;
        for i in 0..200 {
            x = (x * 97.13 + 0.311).fract();
            let y = (x * 53.7).fract();
            let z = (x * 11.1).fract();
            centers.push(vec![x * 20.0, y * 20.0, z * 5.0, (i % 3) as f64]);
            radii.push(0.3 + y);
        }
        assert_eq!(close_pairs(&centers, &radii, 0.01), brute(&centers, &radii, 0.01));
    }

    #[test]
    fn banded_grids_match_brute_force() {
        let mut centers = vec![vec![0.0, 0.0]];
        let mut radii = vec![1e5];
        for i in 0..50 {
            let t = i as f64 * 0.1;
            centers.push(vec![(1e5 + 1e-1) * t.cos(), (1e5 + 1e-1) * t.sin()]);
            radii.push(0.1 + 0.001 * i as f64);
        }
        assert_eq!(close_pairs(&centers, &radii, 1e-3), brute(&centers, &radii, 1e-3));
    }

    #[test]
    fn point_grid_queries() {
        let pts: Vec<Vec<f64>> = (0..100).map(|i| vec![(i % 10) as f64, (i / 10) as f64]).collect();
        let g = PointGrid::new(&pts);
        assert_eq!(g.within(&[4.0, 4.0], 1.0), vec![34, 43, 44, 45, 54]);
        assert_eq!(g.nearest_other(0), Some(1.0));
        let far = vec![vec![0.0], vec![1000.0]];
        assert_eq!(PointGrid::new(&far).nearest_other(1), Some(1000.0));
    }
}
