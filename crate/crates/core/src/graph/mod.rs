//! Finite simple graphs, rooted graphs and the combinatorial machinery built on them.
//!
//! Vertices are addressed by dense indices `0..n`; every vertex also carries a
//! stable [`VertexId`] label that survives I/O and subgraph extraction.

mod bs;
mod cheeger;
mod hull;
pub mod io;
mod iso;
mod profile;

use std::collections::{HashMap, VecDeque};

use crate::error::{invalid, Result};

pub use bs::{bs_distance, neighborhood_census, BsDistance, CensusClass, CensusDistribution, Sampling};
pub use cheeger::{cheeger_constant, cheeger_constant_with, CheegerMode, CheegerResult, DEFAULT_EXHAUSTIVE_THRESHOLD};
pub use hull::{ball, hull_sequence, vertex_boundary, HullSequence};
pub use iso::{canonical_form, rooted_isomorphic, CanonicalForm};
pub use profile::{iso_profile, IsoProfile, ProfileRow};

/// Stable external vertex identifier.
pub type VertexId = u64;

/// Finite simple undirected graph.
///
/// Adjacency lists are sorted and free of loops and duplicates, so two graphs
/// built from the same labels and edge set compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<VertexId>,
    adj: Vec<Vec<usize>>,
    index: HashMap<VertexId, usize>,
}

impl Graph {
    /// Edgeless graph on the given labels.
    pub fn new(labels: Vec<VertexId>) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, &l) in labels.iter().enumerate() {
            if index.insert(l, i).is_some() {
                return Err(invalid(format!("duplicate vertex id {l}")));
            }
        }
        let adj = vec![Vec::new(); labels.len()];
        Ok(Self { labels, adj, index })
    }

    /// Edgeless graph labelled `0..n`.
    pub fn with_vertices(n: usize) -> Self {
        Self::new((0..n as VertexId).collect()).expect("labels are distinct")
    }

    /// Builds a graph from index pairs. Repeated edges are merged; loops are rejected.
    pub fn from_edges<I>(labels: Vec<VertexId>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(labels)?;
        let n = g.len();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(invalid(format!("edge ({u}, {v}) references a vertex outside 0..{n}")));
            }
            if u == v {
                return Err(invalid(format!("loop at vertex {}", g.labels[u])));
            }
            g.adj[u].push(v);
            g.adj[v].push(u);
        }
        for list in &mut g.adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> VertexId {
        self.labels[v]
    }

    pub fn index_of(&self, id: VertexId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    /// Maps a list of labels to indices, failing on the first unknown label.
    pub fn indices_of(&self, ids: &[VertexId]) -> Result<Vec<usize>> {
        ids.iter()
            .map(|&id| self.index_of(id).ok_or_else(|| invalid(format!("unknown vertex id {id}"))))
            .collect()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as index pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Induced subgraph on `vertices` (in the given order), labels preserved.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.len()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let labels = vertices.iter().map(|&v| self.labels[v]).collect();
        let edges = vertices.iter().enumerate().flat_map(|(i, &v)| {
            let local = &local;
            self.adj[v]
                .iter()
                .filter_map(move |&w| (local[w] != usize::MAX && local[w] > i).then_some((i, local[w])))
        });
        Graph::from_edges(labels, edges.collect::<Vec<_>>()).expect("induced subgraph of a simple graph")
    }

    /// Breadth-first hop distances from a set of sources; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, sources: &[usize]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued vertices have a distance");
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Largest finite hop distance from `v`.
    pub fn eccentricity(&self, v: usize) -> usize {
        self.bfs_distances(&[v]).into_iter().flatten().max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.bfs_distances(&[0]).iter().all(Option::is_some)
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(invalid(format!("vertex index {v} outside 0..{}", self.len())))
        }
    }
}

/// A graph with a distinguished root vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedGraph {
    pub graph: Graph,
    pub root: usize,
}

impl RootedGraph {
    pub fn new(graph: Graph, root: usize) -> Result<Self> {
        graph.check_vertex(root)?;
        Ok(Self { graph, root })
    }

    pub fn root_label(&self) -> VertexId {
        self.graph.label(self.root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_normalizes() {
        let g = Graph::from_edges(vec![10, 20, 30], [(0, 1), (1, 0), (2, 1)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(g.index_of(30), Some(2));
    }

    #[test]
    fn rejects_loops_and_duplicate_ids() {
        assert!(Graph::from_edges(vec![0, 1], [(1, 1)]).is_err());
        assert!(Graph::new(vec![3, 3]).is_err());
        assert!(Graph::from_edges(vec![0, 1], [(0, 2)]).is_err());
    }

    #[test]
    fn induced_keeps_labels() {
        let g = Graph::from_edges(vec![5, 6, 7, 8], [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let h = g.induced(&[2, 1, 0]);
        assert_eq!(h.labels(), &[7, 6, 5]);
        assert_eq!(h.edge_count(), 2);
        assert!(h.has_edge(0, 1) && h.has_edge(1, 2) && !h.has_edge(0, 2));
    }

    #[test]
    fn rooted_graph_checks_root() {
        assert!(RootedGraph::new(Graph::with_vertices(2), 2).is_err());
    }
}
