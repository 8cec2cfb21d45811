//! Root-preserving isomorphism and canonical forms.
//!
//! Both use the same vertex invariants: colours start from
//! `(distance to root, degree)` and are refined by neighbour-colour multisets
//! until stable. [`rooted_isomorphic`] then runs a colour-constrained
//! backtracking match; [`canonical_form`] runs an individualisation–refinement
//! search and keeps the lexicographically smallest adjacency encoding, pruning
//! with the automorphisms it discovers along the way.

use std::cmp::Ordering;
use std::fmt::Write as _;

use super::{Graph, RootedGraph};

/// Lexicographically minimal upper-triangle adjacency encoding of a rooted graph.
///
/// Equal forms means isomorphic rooted graphs; the root always sits at position 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub n: usize,
    words: Vec<u64>,
}

impl CanonicalForm {
    /// Compact string key `"<n>:<hex words>"`.
    pub fn key(&self) -> String {
        let mut s = format!("{}:", self.n);
        for w in &self.words {
            write!(s, "{w:016x}").expect("writing to a String");
        }
        s
    }
}

fn rank_keys<K: Ord>(keys: &[K]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut colors = vec![0; keys.len()];
    let mut c = 0;
    for w in 0..idx.len() {
        if w > 0 && keys[idx[w]] != keys[idx[w - 1]] {
            c += 1;
        }
        colors[idx[w]] = c;
    }
    colors
}

fn color_count(colors: &[usize]) -> usize {
    colors.iter().copied().max().map_or(0, |m| m + 1)
}

/// Refines `colors` (dense ranks) until stable. The colour order is invariant under relabelling.
fn refine(g: &Graph, colors: &mut Vec<usize>) {
    let n = g.len();
    let mut count = color_count(colors);
    loop {
        if count == n {
            return;
        }
        let keys: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = rank_keys(&keys);
        let next_count = color_count(&next);
        *colors = next;
        if next_count == count {
            return;
        }
        count = next_count;
    }
}

fn initial_colors(g: &Graph, root: usize) -> Vec<usize> {
    let dist = g.bfs_distances(&[root]);
    let keys: Vec<(usize, usize)> = (0..g.len())
        .map(|v| (dist[v].unwrap_or(usize::MAX), g.degree(v)))
        .collect();
    rank_keys(&keys)
}

fn individualize(colors: &[usize], v: usize) -> Vec<usize> {
    let c = colors[v];
    colors
        .iter()
        .enumerate()
        .map(|(x, &cx)| match cx.cmp(&c) {
            Ordering::Less => cx,
            Ordering::Equal if x == v => c,
            Ordering::Equal => c + 1,
            Ordering::Greater => cx + 1,
        })
        .collect()
}

fn encode(g: &Graph, perm: &[usize]) -> Vec<u64> {
    let n = perm.len();
    let bits = n * n.saturating_sub(1) / 2;
    let mut words = vec![0u64; bits.div_ceil(64)];
    let mut t = 0;
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(perm[i], perm[j]) {
                words[t / 64] |= 1u64 << (63 - t % 64);
            }
            t += 1;
        }
    }
    words
}

struct Leaf {
    words: Vec<u64>,
    perm: Vec<usize>,
    seq: Vec<usize>,
}

struct CanonSearch<'a> {
    g: &'a Graph,
    best: Option<Leaf>,
    automorphisms: Vec<Vec<usize>>,
}

impl CanonSearch<'_> {
    /// Returns `Some(j)` to abandon every node deeper than `j`.
    fn visit(&mut self, colors: Vec<usize>, seq: &mut Vec<usize>) -> Option<usize> {
        let n = self.g.len();
        if color_count(&colors) == n {
            let mut perm = vec![0; n];
            for (v, &c) in colors.iter().enumerate() {
                perm[c] = v;
            }
            let words = encode(self.g, &perm);
            let Some(best) = &self.best else {
                self.best = Some(Leaf { words, perm, seq: seq.clone() });
                return None;
            };
            return match words.cmp(&best.words) {
                Ordering::Less => {
                    self.best = Some(Leaf { words, perm, seq: seq.clone() });
                    None
                }
                Ordering::Greater => None,
                Ordering::Equal => {
                    let mut gamma = vec![0; n];
                    for (i, &v) in best.perm.iter().enumerate() {
                        gamma[v] = perm[i];
                    }
                    let common = best.seq.iter().zip(seq.iter()).take_while(|(a, b)| a == b).count();
                    self.automorphisms.push(gamma);
                    Some(common)
                }
            };
        }

        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c] += 1;
        }
        let target = sizes.iter().position(|&s| s >= 2).expect("non-discrete partition");
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let depth = seq.len();
        let mut explored: Vec<usize> = Vec::new();
        for c in cell {
            if !explored.is_empty() && self.same_orbit(c, &explored, seq) {
                continue;
            }
            let mut child = individualize(&colors, c);
            refine(self.g, &mut child);
            seq.push(c);
            let jump = self.visit(child, seq);
            seq.pop();
            explored.push(c);
            if let Some(j) = jump {
                if j < depth {
                    return Some(j);
                }
            }
        }
        None
    }

    /// Whether `c` shares an orbit with an explored vertex under the known
    /// automorphisms that fix `seq` pointwise.
    fn same_orbit(&self, c: usize, explored: &[usize], seq: &[usize]) -> bool {
        let n = self.g.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for gamma in &self.automorphisms {
            if seq.iter().any(|&s| gamma[s] != s) {
                continue;
            }
            any = true;
            for v in 0..n {
                let (a, b) = (find(&mut parent, v), find(&mut parent, gamma[v]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let rc = find(&mut parent, c);
        explored.iter().any(|&e| find(&mut parent, e) == rc)
    }
}

/// Canonical form of a rooted graph; isomorphic rooted graphs get identical forms.
pub fn canonical_form(rg: &RootedGraph) -> CanonicalForm {
    let g = &rg.graph;
    let mut colors = initial_colors(g, rg.root);
    refine(g, &mut colors);
    let mut search = CanonSearch {
        g,
        best: None,
        automorphisms: Vec::new(),
    };
    search.visit(colors, &mut Vec::new());
    let best = search.best.expect("search reaches at least one leaf");
    CanonicalForm { n: g.len(), words: best.words }
}

/// Whether a root-preserving isomorphism `a → b` exists.
pub fn rooted_isomorphic(a: &RootedGraph, b: &RootedGraph) -> bool {
    let (ga, gb) = (&a.graph, &b.graph);
    let n = ga.len();
    if n != gb.len() || ga.edge_count() != gb.edge_count() {
        return false;
    }
    if n == 0 {
        return true;
    }

    // Refine the disjoint union so colours are comparable across the two graphs.
    let union = Graph::from_edges(
        (0..2 * n as u64).collect(),
        ga.edges().chain(gb.edges().map(|(u, v)| (u + n, v + n))).collect::<Vec<_>>(),
    )
    .expect("disjoint union of simple graphs");
    let da = ga.bfs_distances(&[a.root]);
    let db = gb.bfs_distances(&[b.root]);
    let keys: Vec<(usize, usize)> = (0..2 * n)
        .map(|v| {
            let d = if v < n { da[v] } else { db[v - n] };
            (d.unwrap_or(usize::MAX), union.degree(v))
        })
        .collect();
    let mut colors = rank_keys(&keys);
    refine(&union, &mut colors);
    let (ca, cb) = colors.split_at(n);

    let mut hist = vec![0i64; color_count(&colors)];
    for &c in ca {
        hist[c] += 1;
    }
    for &c in cb {
        hist[c] -= 1;
    }
    if hist.iter().any(|&h| h != 0) || ca[a.root] != cb[b.root] {
        return false;
    }

    // Match in BFS order from the root so most vertices have a mapped neighbour.
    let mut order: Vec<usize> = {
        let mut by_depth: Vec<(usize, usize)> =
            (0..n).map(|v| (da[v].unwrap_or(usize::MAX), v)).collect();
        by_depth.sort_unstable();
        by_depth.into_iter().map(|(_, v)| v).collect()
    };
    debug_assert_eq!(order[0], a.root);
    order.dedup();

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut cands: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut next: Vec<usize> = Vec::with_capacity(n);
    let mut depth = 0;

    let feasible = |x: usize, y: usize, map: &[usize], used: &[bool]| -> bool {
        if used[y] || ca[x] != cb[y] {
            return false;
        }
        let mut mapped = 0;
        for &w in ga.neighbors(x) {
            if map[w] != usize::MAX {
                if !gb.has_edge(y, map[w]) {
                    return false;
                }
                mapped += 1;
            }
        }
        gb.neighbors(y).iter().filter(|&&z| used[z]).count() == mapped
    };

    loop {
        if depth == n {
            return true;
        }
        let x = order[depth];
        if cands.len() == depth {
            let list = if depth == 0 {
                vec![b.root]
            } else if let Some(&w) = ga.neighbors(x).iter().find(|&&w| map[w] != usize::MAX) {
                gb.neighbors(map[w]).iter().copied().filter(|&y| cb[y] == ca[x]).collect()
            } else {
                (0..n).filter(|&y| cb[y] == ca[x]).collect()
            };
            cands.push(list);
            next.push(0);
        }
        if map[x] != usize::MAX {
            used[map[x]] = false;
            map[x] = usize::MAX;
        }
        let mut placed = false;
        while next[depth] < cands[depth].len() {
            let y = cands[depth][next[depth]];
            next[depth] += 1;
            if feasible(x, y, &map, &used) {
                map[x] = y;
                used[y] = true;
                placed = true;
                break;
            }
        }
        if placed {
            depth += 1;
        } else {
            cands.pop();
            next.pop();
            if depth == 0 {
                return false;
            }
            depth -= 1;
        }
    }
}
