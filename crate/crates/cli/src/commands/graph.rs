use std::path::PathBuf;

use clap::{Subcommand, ValueEnum};
use dpack_core::graph::{
    ball, bs_distance, cheeger_constant_with, hull_sequence, iso_profile, neighborhood_census, vertex_boundary,
    BsDistance, CheegerMode, RootedGraph, Sampling, DEFAULT_EXHAUSTIVE_THRESHOLD,
};
use dpack_core::Graph;
use serde::Serialize;
use serde_json::json;

use super::{require_seed, Input, RootedInput};
use crate::docs::{graph_doc, indices_of, pick_root, read_graph, Table};
use crate::{Failure, GlobalArgs, Output};

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheegerArg {
    Exact,
    Heuristic,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphCmd {
    /// The combinatorial ball of radius `--radius`, rooted at its centre.
    Ball {
        #[command(flatten)]
        input: RootedInput,
        #[arg(long)]
        radius: usize,
    },
    /// Benjamini–Schramm distance between two rooted graphs.
    BsDistance {
        /// First rooted graph.
        #[arg(long)]
        a: PathBuf,
        /// Second rooted graph.
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        root_a: Option<u64>,
        #[arg(long)]
        root_b: Option<u64>,
        /// Largest radius compared.
        #[arg(long, default_value_t = 64)]
        k_max: usize,
    },
    /// Vertex boundary of a set.
    Boundary {
        #[command(flatten)]
        input: Input,
        /// Comma-separated vertex ids.
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
    },
    /// Hull sequence sizes `|W_k|` and `|∂W_k|`.
    Hull {
        #[command(flatten)]
        input: RootedInput,
        #[arg(long)]
        max_k: Option<usize>,
    },
    /// Cheeger constant over connected sets of at most half the vertices.
    Cheeger {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = CheegerArg::Exact)]
        mode: CheegerArg,
        /// Vertex-count guard for exact enumeration.
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_THRESHOLD)]
        threshold: usize,
    },
    /// Growth table and fitted exponent of `|∂W_k| ≈ c |W_k|^α`.
    IsoProfile {
        #[command(flatten)]
        input: RootedInput,
        #[arg(long)]
        max_k: Option<usize>,
    },
    /// Law of radius-`k` ball classes under a uniform root, per input graph.
    Census {
        /// Input graphs, in sequence order.
        #[arg(long = "input", required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        k: usize,
        /// Sample this many roots (needs --seed) instead of visiting all.
        #[arg(long)]
        sample: Option<usize>,
    },
}

impl GraphCmd {
    pub fn name(&self) -> &'static str {
        match self {
            GraphCmd::Ball { .. } => "ball",
            GraphCmd::BsDistance { .. } => "bs-distance",
            GraphCmd::Boundary { .. } => "boundary",
            GraphCmd::Hull { .. } => "hull",
            GraphCmd::Cheeger { .. } => "cheeger",
            GraphCmd::IsoProfile { .. } => "iso-profile",
            GraphCmd::Census { .. } => "census",
        }
    }
}

fn rooted(input: &RootedInput) -> Result<(Graph, usize), Failure> {
    let (g, doc_root) = read_graph(&input.input.input)?;
    let root = pick_root(&g, input.root, doc_root)?;
    Ok((g, root))
}

fn labels(g: &Graph, vs: &[usize]) -> Vec<u64> {
    vs.iter().map(|&v| g.label(v)).collect()
}

pub fn graph(cmd: &GraphCmd, global: &GlobalArgs) -> Result<Output, Failure> {
    match cmd {
        GraphCmd::Ball { input, radius } => {
            let (g, o) = rooted(input)?;
            let b = ball(&g, o, *radius)?;
            Ok(Output::doc(graph_doc(&b.graph, Some(b.root))))
        }
        GraphCmd::BsDistance { a, b, root_a, root_b, k_max } => {
            let load = |path: &PathBuf, root: Option<u64>| -> Result<RootedGraph, Failure> {
                let (g, doc_root) = read_graph(path)?;
                let r = pick_root(&g, root, doc_root)?;
                Ok(RootedGraph::new(g, r)?)
            };
            let (ra, rb) = (load(a, *root_a)?, load(b, *root_b)?);
            let d = bs_distance(&ra, &rb, *k_max);
            let (kind, radius) = match d {
                BsDistance::Isomorphic => ("isomorphic", None),
                BsDistance::Agree { radius } => ("agree", Some(radius)),
                BsDistance::Truncated { radius } => ("truncated", Some(radius)),
            };
            Ok(Output::doc(json!({
                "format": "dpack-bs-distance/1",
                "value": d.value(),
                "exact": d.is_exact(),
                "kind": kind,
                "agree_radius": radius,
                "root_a": ra.root_label(),
                "root_b": rb.root_label(),
            })))
        }
        GraphCmd::Boundary { input, set } => {
            let (g, _) = read_graph(&input.input)?;
            let w = indices_of(&g, set, "--set")?;
            let b = vertex_boundary(&g, &w)?;
            let mut sorted_set = set.clone();
            sorted_set.sort_unstable();
            sorted_set.dedup();
            Ok(Output::doc(json!({
                "format": "dpack-vertex-set/1",
                "set": sorted_set,
                "boundary": labels(&g, &b),
            })))
        }
        GraphCmd::Hull { input, max_k } => {
            let (g, o) = rooted(input)?;
            let h = hull_sequence(&g, o, *max_k)?;
            let mut plot = Table::new(&["k", "size", "boundary"]);
            for (k, (n, b)) in h.sizes.iter().zip(&h.boundary_sizes).enumerate() {
                plot.row(&[k.to_string(), n.to_string(), b.to_string()]);
            }
            Ok(Output::doc(json!({
                "format": "dpack-hull/1",
                "root": g.label(o),
                "sizes": h.sizes,
                "boundary_sizes": h.boundary_sizes,
            }))
            .with_plot(plot.finish()))
        }
        GraphCmd::Cheeger { input, mode, threshold } => {
            let (g, _) = read_graph(&input.input)?;
            let mode = match mode {
                CheegerArg::Exact => CheegerMode::Exact,
                CheegerArg::Heuristic => CheegerMode::Heuristic,
            };
            let r = cheeger_constant_with(&g, mode, *threshold)?;
            Ok(Output::doc(json!({
                "format": "dpack-cheeger/1",
                "mode": match r.mode { CheegerMode::Exact => "exact", CheegerMode::Heuristic => "heuristic" },
                "value": r.value(),
                "boundary": r.boundary,
                "size": r.size,
                "witness": labels(&g, &r.witness),
            })))
        }
        GraphCmd::IsoProfile { input, max_k } => {
            let (g, o) = rooted(input)?;
            let prof = iso_profile(&g, o, *max_k)?;
            let mut plot = Table::new(&["k", "size", "boundary"]);
            for r in &prof.rows {
                plot.row(&[r.k.to_string(), r.size.to_string(), r.boundary.to_string()]);
            }
            let mut doc = json!({"format": "dpack-iso-profile/1", "root": g.label(o)});
            super::pack::merge(&mut doc, serde_json::to_value(&prof).expect("profile serializes"));
            Ok(Output::doc(doc).with_plot(plot.finish()))
        }
        GraphCmd::Census { inputs, k, sample } => {
            let graphs = inputs
                .iter()
                .map(|p| read_graph(p).map(|(g, _)| g))
                .collect::<Result<Vec<_>, _>>()?;
            let sampling = match sample {
                None => Sampling::All,
                Some(count) => Sampling::Sampled {
                    count: *count,
                    seed: require_seed(global.seed, "graph census --sample")?,
                },
            };
            let dists = neighborhood_census(&graphs, *k, sampling)?;
            Ok(Output::doc(json!({
                "format": "dpack-neighborhood-census/1",
                "k": k,
                "distributions": dists,
            })))
        }
    }
}
