//! `dpack-graph/1` documents.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

use super::{Graph, RootedGraph, VertexId};

pub const GRAPH_FORMAT: &str = "dpack-graph/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub format: String,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<[VertexId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<VertexId>,
}

impl GraphDocument {
    pub fn from_graph(g: &Graph, root: Option<usize>) -> Self {
        GraphDocument {
            format: GRAPH_FORMAT.to_string(),
            vertices: g.labels().to_vec(),
            edges: g.edges().map(|(u, v)| [g.label(u), g.label(v)]).collect(),
            root: root.map(|r| g.label(r)),
        }
    }

    /// Builds the graph, reporting the offending field on failure.
    pub fn to_graph(&self) -> Result<Graph> {
        if self.format != GRAPH_FORMAT {
            return Err(invalid(format!("format: expected \"{GRAPH_FORMAT}\", found \"{}\"", self.format)));
        }
        let g = Graph::new(self.vertices.clone()).map_err(|e| invalid(format!("vertices: {e}")))?;
        let mut seen = std::collections::HashSet::new();
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, &[a, b]) in self.edges.iter().enumerate() {
            let u = g.index_of(a).ok_or_else(|| invalid(format!("edges[{i}][0]: unknown vertex {a}")))?;
            let v = g.index_of(b).ok_or_else(|| invalid(format!("edges[{i}][1]: unknown vertex {b}")))?;
            if u == v {
                return Err(invalid(format!("edges[{i}]: loop at vertex {a}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(invalid(format!("edges[{i}]: duplicate edge {{{a}, {b}}}")));
            }
            edges.push((u, v));
        }
        Graph::from_edges(self.vertices.clone(), edges)
    }

    pub fn root_index(&self, g: &Graph) -> Result<Option<usize>> {
        self.root
            .map(|r| g.index_of(r).ok_or_else(|| invalid(format!("root: unknown vertex {r}"))))
            .transpose()
    }

    pub fn to_rooted(&self) -> Result<RootedGraph> {
        let g = self.to_graph()?;
        let root = self.root_index(&g)?.ok_or_else(|| invalid("root: missing"))?;
        RootedGraph::new(g, root)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::grid_graph;

    #[test]
    fn round_trip() {
        let g = grid_graph(2, 3).unwrap();
        let doc = GraphDocument::from_graph(&g, Some(4));
        let text = serde_json::to_string(&doc).unwrap();
        let back = GraphDocument::parse(&text).unwrap();
        assert_eq!(back.to_graph().unwrap(), g);
        assert_eq!(back.to_rooted().unwrap().root, 4);
    }

    #[test]
    fn field_precise_errors() {
        let bad = r#"{"format":"dpack-graph/1","vertices":[1,2],"edges":[[1,2],[2,9]]}"#;
        let err = GraphDocument::parse(bad).unwrap().to_graph().unwrap_err().to_string();
        assert!(err.contains("edges[1][1]"), "{err}");

        let syntax = "{\"format\": \"dpack-graph/1\",\n \"vertices\": [1,}";
        match GraphDocument::parse(syntax) {
            Err(crate::Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
