//! Circle packings of combinatorial disk triangulations by radius iteration.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::geometry::{Ball, Packing};
use crate::graph::{Graph, VertexId};

/// A triangulated closed disk on vertices `0..n`.
///
/// Faces are stored consistently oriented; `boundary` lists the boundary cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskTriangulation {
    n: usize,
    faces: Vec<[usize; 3]>,
    boundary: Vec<usize>,
    on_boundary: Vec<bool>,
}

fn edge_key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl DiskTriangulation {
    /// Checks that `faces` triangulate a disk and orients them coherently.
    ///
    /// Required: every edge lies in one or two faces, the link of every vertex
    /// is a single path or cycle, the boundary edges form one cycle, and
    /// `V − E + F = 1`.
    pub fn new(n: usize, faces: Vec<[usize; 3]>) -> Result<Self> {
        if faces.is_empty() {
            return Err(invalid("triangulation has no faces"));
        }
        let mut edge_faces: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let mut used = vec![false; n];
        for (fi, f) in faces.iter().enumerate() {
            if f.iter().any(|&v| v >= n) {
                return Err(invalid(format!("face {fi} references a vertex outside 0..{n}")));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(invalid(format!("face {fi} repeats a vertex")));
            }
            for i in 0..3 {
                used[f[i]] = true;
                edge_faces.entry(edge_key(f[i], f[(i + 1) % 3])).or_default().push(fi);
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(invalid(format!("vertex {v} lies in no face")));
        }
        if let Some((e, fs)) = edge_faces.iter().find(|(_, fs)| fs.len() > 2) {
            return Err(invalid(format!("edge {e:?} lies in {} faces", fs.len())));
        }
        let euler = n as i64 - edge_faces.len() as i64 + faces.len() as i64;
        if euler != 1 {
            return Err(invalid(format!("Euler characteristic is {euler}, a disk has 1")));
        }

        // Vertex links: the edges opposite v in its faces.
        let mut link: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for f in &faces {
            for i in 0..3 {
                link[f[i]].push((f[(i + 1) % 3], f[(i + 2) % 3]));
            }
        }
        let mut on_boundary = vec![false; n];
        let mut bnd_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (&(u, v), fs) in &edge_faces {
            if fs.len() == 1 {
                on_boundary[u] = true;
                on_boundary[v] = true;
                bnd_adj[u].push(v);
                bnd_adj[v].push(u);
            }
        }
        for v in 0..n {
            check_link(v, &link[v], on_boundary[v])?;
            if on_boundary[v] && bnd_adj[v].len() != 2 {
                return Err(invalid(format!("boundary vertex {v} has {} boundary edges", bnd_adj[v].len())));
            }
        }
        let start = on_boundary
            .iter()
            .position(|&b| b)
            .ok_or_else(|| invalid("triangulation has no boundary"))?;
        let mut boundary = vec![start];
        let (mut prev, mut cur) = (start, bnd_adj[start][0]);
        while cur != start {
            boundary.push(cur);
            let next = if bnd_adj[cur][0] == prev { bnd_adj[cur][1] } else { bnd_adj[cur][0] };
            (prev, cur) = (cur, next);
        }
        if boundary.len() != on_boundary.iter().filter(|&&b| b).count() {
            return Err(invalid("boundary edges form more than one cycle"));
        }

        let faces = orient(faces, &edge_faces)?;
        Ok(Self {
            n,
            faces,
            boundary,
            on_boundary,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn is_interior(&self, v: usize) -> bool {
        !self.on_boundary[v]
    }

    /// The 1-skeleton, labelled `0..n`.
    pub fn graph(&self) -> Graph {
        let edges = self.faces.iter().flat_map(|f| [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])]);
        Graph::from_edges((0..self.n as VertexId).collect(), edges.collect::<Vec<_>>()).expect("faces are checked")
    }
}

fn check_link(v: usize, link: &[(usize, usize)], boundary: bool) -> Result<()> {
    let mut deg: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, b) in link {
        deg.entry(a).or_default().push(b);
        deg.entry(b).or_default().push(a);
    }
    let ends = deg.values().filter(|n| n.len() == 1).count();
    let bad = deg.values().any(|n| n.len() > 2);
    let shape_ok = if boundary { ends == 2 } else { ends == 0 };
    // Connected: walking the link from one vertex must visit all of it.
    let start = *deg.keys().min().expect("vertex lies in a face");
    let mut seen = vec![start];
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &y in &deg[&x] {
            if !seen.contains(&y) {
                seen.push(y);
                stack.push(y);
            }
        }
    }
    if bad || !shape_ok || seen.len() != deg.len() {
        return Err(invalid(format!("the faces around vertex {v} do not form a single fan")));
    }
    Ok(())
}

/// Flips faces so that every shared edge is traversed in opposite directions.
fn orient(mut faces: Vec<[usize; 3]>, edge_faces: &HashMap<(usize, usize), Vec<usize>>) -> Result<Vec<[usize; 3]>> {
    let has_directed = |f: &[usize; 3], u: usize, v: usize| (0..3).any(|i| f[i] == u && f[(i + 1) % 3] == v);
    let mut done = vec![false; faces.len()];
    done[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(fi) = queue.pop_front() {
        let f = faces[fi];
        for i in 0..3 {
            let (u, v) = (f[i], f[(i + 1) % 3]);
            for &gi in &edge_faces[&edge_key(u, v)] {
                if gi == fi {
                    continue;
                }
                let same = has_directed(&faces[gi], u, v);
                if done[gi] {
                    if same {
                        return Err(invalid("triangulation is not orientable"));
                    }
                    continue;
                }
                if same {
                    faces[gi].swap(1, 2);
                }
                done[gi] = true;
                queue.push_back(gi);
            }
        }
    }
    if done.iter().any(|d| !d) {
        return Err(invalid("faces are not connected through edges"));
    }
    Ok(faces)
}

/// Hexagonal patch of the triangular lattice: all points within hex distance
/// `rings` of the centre, with vertex 0 at the centre and ids increasing by ring.
pub fn hex_disk_triangulation(rings: usize) -> Result<DiskTriangulation> {
    if rings == 0 {
        return Err(invalid("rings must be at least 1"));
    }
    let r = rings as i64;
    let dist = |q: i64, s: i64| (q.abs() + s.abs() + (q + s).abs()) / 2;
    let mut pts: Vec<(i64, i64, i64)> = Vec::new();
    for q in -r..=r {
        for s in -r..=r {
            if dist(q, s) <= r {
                pts.push((dist(q, s), q, s));
            }
        }
    }
    pts.sort_unstable();
    let index: HashMap<(i64, i64), usize> = pts.iter().enumerate().map(|(i, &(_, q, s))| ((q, s), i)).collect();
    let mut faces = Vec::new();
    // The anchor of a downward triangle is not one of its corners, so scan a wider box.
    for (q, s) in (-r - 1..=r).flat_map(|q| (-r - 1..=r).map(move |s| (q, s))) {
        let tri = [[(q, s), (q + 1, s), (q, s + 1)], [(q + 1, s), (q + 1, s + 1), (q, s + 1)]];
        for t in tri {
            if let (Some(&a), Some(&b), Some(&c)) = (index.get(&t[0]), index.get(&t[1]), index.get(&t[2])) {
                faces.push([a, b, c]);
            }
        }
    }
    DiskTriangulation::new(pts.len(), faces)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PackOptions {
    /// Stop once every interior angle sum is within this of `2π`.
    pub tol: f64,
    pub max_rounds: usize,
}

impl Default for PackOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_rounds: 100_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CirclePackResult {
    /// Ball `v` realises vertex `v`.
    pub packing: Packing,
    pub radii: Vec<f64>,
    pub converged: bool,
    pub rounds: usize,
    /// Largest `|θ(v) − 2π|` over interior vertices at exit.
    pub max_deviation: f64,
}

/// Angle at the circle of radius `x` in the triangle of mutually tangent circles `x, y, z`.
fn corner_angle(x: f64, y: f64, z: f64) -> f64 {
    2.0 * ((y * z) / ((x + y) * (x + z))).sqrt().asin()
}

/// Packs `t` with the given boundary radii: one value for all boundary vertices,
/// or one per vertex of [`DiskTriangulation::boundary`] in that order.
///
/// Interior radii follow the uniform-neighbour update, damped by 0.5 and
/// accelerated while the angle error keeps shrinking; the result is laid out
/// face by face from the first face.
pub fn disk_triangulation_pack(t: &DiskTriangulation, boundary_radii: &[f64], opts: &PackOptions) -> Result<CirclePackResult> {
    let nb = t.boundary.len();
    if boundary_radii.len() != 1 && boundary_radii.len() != nb {
        return Err(invalid(format!(
            "expected 1 or {nb} boundary radii, got {}",
            boundary_radii.len()
        )));
    }
    if boundary_radii.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(invalid("boundary radii must be positive and finite"));
    }
    let mut radii = vec![0.0; t.n];
    for (i, &v) in t.boundary.iter().enumerate() {
        radii[v] = boundary_radii[if boundary_radii.len() == 1 { 0 } else { i }];
    }
    let mean = t.boundary.iter().map(|&v| radii[v]).sum::<f64>() / nb as f64;
    let interior: Vec<usize> = (0..t.n).filter(|&v| t.is_interior(v)).collect();
    for &v in &interior {
        radii[v] = mean;
    }

    // Corners (y, z) of the faces around each interior vertex.
    let mut corners: Vec<Vec<(usize, usize)>> = vec![Vec::new(); t.n];
    for f in &t.faces {
        for i in 0..3 {
            corners[f[i]].push((f[(i + 1) % 3], f[(i + 2) % 3]));
        }
    }
    let angle_sum = |radii: &[f64], v: usize| -> f64 {
        corners[v].iter().map(|&(y, z)| corner_angle(radii[v], radii[y], radii[z])).sum()
    };
    let max_dev = |radii: &[f64]| -> f64 {
        interior
            .iter()
            .map(|&v| (angle_sum(radii, v) - 2.0 * PI).abs())
            .fold(0.0, f64::max)
    };

    let mut omega = 0.5;
    let mut err = max_dev(&radii);
    let mut rounds = 0;
    while err > opts.tol && rounds < opts.max_rounds {
        for &v in &interior {
            let k = corners[v].len() as f64;
            let theta = angle_sum(&radii, v);
            let beta = (theta / (2.0 * k)).sin();
            let delta = (PI / k).sin();
            let target = radii[v] * beta / (1.0 - beta) * (1.0 - delta) / delta;
            let old = radii[v];
            radii[v] = (old + omega * (target - old)).max(0.1 * old);
        }
        rounds += 1;
        let new_err = max_dev(&radii);
        omega = if new_err < err { (omega * 1.1).min(1.8) } else { 0.5 };
        err = new_err;
    }

    let centers = layout(t, &radii);
    let balls = (0..t.n)
        .map(|v| Ball {
            id: v as VertexId,
            center: centers[v].to_vec(),
            radius: radii[v],
        })
        .collect();
    Ok(CirclePackResult {
        packing: Packing::new(2, balls, 1e-6)?,
        radii,
        converged: err <= opts.tol,
        rounds,
        max_deviation: err,
    })
}

fn layout(t: &DiskTriangulation, r: &[f64]) -> Vec<[f64; 2]> {
    let mut pos: Vec<Option<[f64; 2]>> = vec![None; t.n];
    let [a, b, _] = t.faces[0];
    pos[a] = Some([0.0, 0.0]);
    pos[b] = Some([r[a] + r[b], 0.0]);
    let mut faces_at: Vec<Vec<usize>> = vec![Vec::new(); t.n];
    for (fi, f) in t.faces.iter().enumerate() {
        for &v in f {
            faces_at[v].push(fi);
        }
    }
    let mut queued = vec![false; t.faces.len()];
    queued[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(fi) = queue.pop_front() {
        let f = t.faces[fi];
        if let Some(i) = (0..3).find(|&i| pos[f[(i + 2) % 3]].is_none()) {
            let (x, y, z) = (f[i], f[(i + 1) % 3], f[(i + 2) % 3]);
            let (px, py) = (pos[x].expect("placed"), pos[y].expect("placed"));
            let base = (py[1] - px[1]).atan2(py[0] - px[0]);
            let ang = base + corner_angle(r[x], r[y], r[z]);
            let d = r[x] + r[z];
            pos[z] = Some([px[0] + d * ang.cos(), px[1] + d * ang.sin()]);
        }
        for &v in &f {
            for &gi in &faces_at[v] {
                let shares_edge = t.faces[gi].iter().filter(|w| f.contains(w)).count() == 2;
                if !queued[gi] && shares_edge {
                    queued[gi] = true;
                    queue.push_back(gi);
                }
            }
        }
    }
    pos.into_iter().map(|p| p.expect("every face is reached")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{tangency_graph, validate_packing};

    #[test]
    fn hex_flower_has_unit_interior() {
        let t = hex_disk_triangulation(1).unwrap();
        assert_eq!(t.len(), 7);
        assert_eq!(t.boundary().len(), 6);
        assert_eq!(t.faces().len(), 6);
        let res = disk_triangulation_pack(&t, &[1.0], &PackOptions::default()).unwrap();
        assert!(res.converged);
        assert!((res.radii[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn packing_realises_triangulation() {
        let t = hex_disk_triangulation(3).unwrap();
        let radii: Vec<f64> = (0..t.boundary().len()).map(|i| 1.0 + 0.3 * ((i as f64) * 0.7).sin()).collect();
        let res = disk_triangulation_pack(&t, &radii, &PackOptions::default()).unwrap();
        assert!(res.converged, "deviation {}", res.max_deviation);
        assert!(validate_packing(&res.packing).unwrap().pass);
        assert_eq!(tangency_graph(&res.packing).unwrap(), t.graph());
    }

    #[test]
    fn rejects_non_disks() {
        // Two triangles sharing only a vertex.
        assert!(DiskTriangulation::new(5, vec![[0, 1, 2], [0, 3, 4]]).is_err());
        // Closed octahedron surface has no boundary.
        let oct = vec![[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 1], [5, 2, 1], [5, 3, 2], [5, 4, 3], [5, 1, 4]];
        assert!(DiskTriangulation::new(6, oct).is_err());
        assert!(DiskTriangulation::new(3, vec![[0, 1, 1]]).is_err());
    }

    #[test]
    fn orientation_is_repaired() {
        let t = DiskTriangulation::new(4, vec![[0, 1, 2], [0, 2, 3]]).unwrap();
        let f = t.faces();
        // Shared edge {0, 2} must run in opposite directions.
        let dir = |f: &[usize; 3], u, v| (0..3).any(|i| f[i] == u && f[(i + 1) % 3] == v);
        assert_ne!(dir(&f[0], 0, 2), dir(&f[1], 0, 2));
    }
}
