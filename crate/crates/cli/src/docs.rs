//! Reading inputs, building result documents and attaching run metadata.

use std::fs;
use std::io::Read;
use std::path::Path;

use dpack_core::geometry::io::{packing_from_csv, packing_from_json, PACKING_FORMAT};
use dpack_core::geometry::tangency_graph;
use dpack_core::graph::io::{GraphDocument, GRAPH_FORMAT};
use dpack_core::graph::hull_sequence;
use dpack_core::modulus::{lower_envelope, Profile, VertexMetric};
use dpack_core::{Graph, Packing, VertexId};
use serde_json::{json, Map, Value};

use crate::Failure;

pub fn read_text(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn looks_like_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

fn in_file(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

/// A packing document (JSON) or table (CSV), told apart by the first character.
pub fn read_packing(path: &Path, csv_tol_rel: f64) -> Result<Packing, Failure> {
    let text = read_text(path)?;
    let parsed = if looks_like_json(&text) {
        packing_from_json(&text)
    } else {
        packing_from_csv(&text, csv_tol_rel)
    };
    parsed.map_err(|e| in_file(path, e))
}

/// A graph document with its optional root; packings are read as their tangency graph.
pub fn read_graph(path: &Path) -> Result<(Graph, Option<usize>), Failure> {
    let text = read_text(path)?;
    if !looks_like_json(&text) {
        let p = packing_from_csv(&text, dpack_core::geometry::DEFAULT_TOL_REL).map_err(|e| in_file(path, e))?;
        return Ok((tangency_graph(&p).map_err(|e| in_file(path, e))?, None));
    }
    let value: Value = serde_json::from_str(&text).map_err(|e| in_file(path, dpack_core::Error::from(e)))?;
    match value.get("format").and_then(Value::as_str) {
        Some(GRAPH_FORMAT) => {
            let doc: GraphDocument = serde_json::from_value(value).map_err(|e| in_file(path, e))?;
            let g = doc.to_graph().map_err(|e| in_file(path, e))?;
            let root = doc.root_index(&g).map_err(|e| in_file(path, e))?;
            Ok((g, root))
        }
        Some(PACKING_FORMAT) => {
            let p = packing_from_json(&text).map_err(|e| in_file(path, e))?;
            Ok((tangency_graph(&p).map_err(|e| in_file(path, e))?, None))
        }
        Some(other) => Err(in_file(
            path,
            format!("format: expected \"{GRAPH_FORMAT}\" or \"{PACKING_FORMAT}\", found \"{other}\""),
        )),
        None => Err(in_file(path, "format: missing")),
    }
}

pub fn index_of(g: &Graph, id: VertexId, what: &str) -> Result<usize, Failure> {
    g.index_of(id)
        .ok_or_else(|| Failure::Input(format!("{what}: unknown vertex {id}")))
}

pub fn indices_of(g: &Graph, ids: &[VertexId], what: &str) -> Result<Vec<usize>, Failure> {
    ids.iter().map(|&id| index_of(g, id, what)).collect()
}

/// `--root` if given, else the document's root, else the first vertex.
pub fn pick_root(g: &Graph, flag: Option<VertexId>, doc_root: Option<usize>) -> Result<usize, Failure> {
    match (flag, doc_root) {
        (Some(id), _) => index_of(g, id, "--root"),
        (None, Some(r)) => Ok(r),
        (None, None) if !g.is_empty() => Ok(0),
        _ => Err(Failure::Input("graph has no vertices".into())),
    }
}

pub fn graph_doc(g: &Graph, root: Option<usize>) -> Value {
    serde_json::to_value(GraphDocument::from_graph(g, root)).expect("graph document serializes")
}

pub fn metric_json(g: &Graph, m: &VertexMetric) -> Value {
    Value::Array(
        m.values()
            .iter()
            .enumerate()
            .map(|(v, &x)| json!({"vertex": g.label(v), "m": x}))
            .collect(),
    )
}

/// The `metric` array of a `dpack-modulus/1` or `dpack-flow/1` document.
pub fn read_metric(path: &Path, g: &Graph) -> Result<VertexMetric, Failure> {
    let text = read_text(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| in_file(path, dpack_core::Error::from(e)))?;
    let entries = value
        .get("metric")
        .and_then(Value::as_array)
        .ok_or_else(|| in_file(path, "metric: missing or not an array"))?;
    let mut m = vec![f64::NAN; g.len()];
    for (i, e) in entries.iter().enumerate() {
        let id = e
            .get("vertex")
            .and_then(Value::as_u64)
            .ok_or_else(|| in_file(path, format!("metric[{i}].vertex: expected an integer id")))?;
        let x = e
            .get("m")
            .and_then(Value::as_f64)
            .ok_or_else(|| in_file(path, format!("metric[{i}].m: expected a number")))?;
        let v = g
            .index_of(id)
            .ok_or_else(|| in_file(path, format!("metric[{i}].vertex: unknown vertex {id}")))?;
        m[v] = x;
    }
    if let Some(v) = m.iter().position(|x| x.is_nan()) {
        return Err(in_file(path, format!("metric: no value for vertex {}", g.label(v))));
    }
    VertexMetric::new(m).map_err(|e| in_file(path, e))
}

/// Parses a profile: `const:V`, `power:C,E` (meaning `C n^E`), `table:N=V;N=V;…`,
/// or `hull`, the lower envelope of the hull data `(|W_k|, |∂W_k|)` from the root.
pub fn parse_profile(spec: &str, hull_source: Option<(&Graph, usize)>) -> Result<Profile, Failure> {
    let bad = |msg: &str| Failure::Input(format!("--profile {spec:?}: {msg}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("{s:?} is not a number")));
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    match kind {
        "const" => Ok(Profile::constant(num(rest)?)),
        "power" => {
            let (c, e) = rest.split_once(',').ok_or_else(|| bad("expected power:C,E"))?;
            Ok(Profile::power(num(c)?, num(e)?))
        }
        "table" => {
            let mut points = Vec::new();
            for item in rest.split(';').filter(|s| !s.trim().is_empty()) {
                let (n, v) = item.split_once('=').ok_or_else(|| bad("expected table:N=V;N=V"))?;
                let n: u64 = n.trim().parse().map_err(|_| bad(&format!("{n:?} is not a positive integer")))?;
                points.push((n, num(v)?));
            }
            Profile::table(points).map_err(|e| bad(&e.to_string()))
        }
        "hull" => {
            let (g, o) = hull_source.ok_or_else(|| bad("hull profiles need a graph input"))?;
            hull_envelope(g, o)
        }
        _ => Err(bad("expected const:, power:, table: or hull")),
    }
}

pub fn hull_envelope(g: &Graph, o: usize) -> Result<Profile, Failure> {
    let h = hull_sequence(g, o, None)?;
    let samples: Vec<(usize, f64)> = h
        .sizes
        .iter()
        .zip(&h.boundary_sizes)
        .filter(|(_, &b)| b > 0)
        .map(|(&n, &b)| (n, b as f64))
        .collect();
    if samples.is_empty() {
        return Err(Failure::Input("hull profile is empty: the root has no neighbours".into()));
    }
    Ok(lower_envelope(&samples)?)
}

/// Run metadata attached to every document.
pub struct RunInfo {
    pub command: String,
    pub config: Value,
    pub seed: Option<u64>,
    pub threads: usize,
    pub canonical: bool,
}

impl RunInfo {
    pub fn to_value(&self) -> Value {
        let mut run = Map::new();
        run.insert("command".into(), json!(self.command));
        run.insert("config".into(), self.config.clone());
        run.insert("seed".into(), json!(self.seed));
        run.insert("threads".into(), json!(self.threads));
        run.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        if !self.canonical {
            let secs = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            run.insert("timestamp".into(), json!(secs));
        }
        Value::Object(run)
    }
}

pub fn with_run(mut doc: Value, run: &RunInfo) -> Value {
    if let Value::Object(map) = &mut doc {
        map.insert("run".into(), run.to_value());
    }
    doc
}

/// Comma-separated CSV rows with a header; reals in round-trip form.
pub struct Table {
    text: String,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            text: header.join(",") + "\n",
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub fn real(x: f64) -> String {
    format!("{x:?}")
}
