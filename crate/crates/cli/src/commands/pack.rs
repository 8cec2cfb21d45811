use clap::{Args, Subcommand};
use dpack_core::geometry::io::{packing_to_csv, PackingDocument};
use dpack_core::geometry::{
    degree_bound_check, normalize_packing, supported_census, tangency_graph, uniformity_constant, validate_packing,
    SupportMode, DEFAULT_TOL_REL,
};
use dpack_core::Packing;
use serde::Serialize;
use serde_json::{json, Value};

use super::Input;
use crate::docs::{graph_doc, read_packing, real, Table};
use crate::{Failure, GlobalArgs, Output, Status};

#[derive(Args, Debug, Clone, Serialize)]
pub struct PackInput {
    #[command(flatten)]
    pub input: Input,
    /// Relative tangency tolerance for CSV input (documents carry their own).
    #[arg(long, default_value_t = DEFAULT_TOL_REL)]
    pub tol_rel: f64,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Candidate,
    Exact,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PackCmd {
    /// Check disjoint interiors; exits 3 when a pair overlaps.
    Verify(PackInput),
    /// Emit the tangency graph.
    Tangency(PackInput),
    /// Uniformity constant and the degree bound `(M(1+2M))^d`; exits 3 if the bound fails.
    Uniformity {
        #[command(flatten)]
        input: PackInput,
        /// Constant for the degree bound (default: the packing's own).
        #[arg(long)]
        m: Option<f64>,
    },
    /// Count `(δ, s)`-supported centers.
    Census {
        #[command(flatten)]
        input: PackInput,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        /// Comma-separated, increasing values of `s`.
        #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 4, 8, 16, 32, 64, 128])]
        s: Vec<usize>,
        #[arg(long, value_enum, default_value_t = ModeArg::Candidate)]
        mode: ModeArg,
    },
    /// Map ball `--id` to the unit ball at the origin.
    Normalize {
        #[command(flatten)]
        input: PackInput,
        #[arg(long)]
        id: u64,
    },
}

impl PackCmd {
    pub fn name(&self) -> &'static str {
        match self {
            PackCmd::Verify(_) => "verify",
            PackCmd::Tangency(_) => "tangency",
            PackCmd::Uniformity { .. } => "uniformity",
            PackCmd::Census { .. } => "census",
            PackCmd::Normalize { .. } => "normalize",
        }
    }
}

fn load(a: &PackInput) -> Result<Packing, Failure> {
    read_packing(&a.input.input, a.tol_rel)
}

pub fn packing_output(p: &Packing) -> Output {
    let doc = serde_json::to_value(PackingDocument::from(p)).expect("packing serializes");
    Output {
        csv: Some(packing_to_csv(p)),
        ..Output::doc(doc)
    }
}

pub fn pack(cmd: &PackCmd, _g: &GlobalArgs) -> Result<Output, Failure> {
    match cmd {
        PackCmd::Verify(a) => {
            let p = load(a)?;
            let report = validate_packing(&p)?;
            let status = if report.pass {
                Status::Ok
            } else {
                Status::AssertionFailed(format!("{} overlapping pairs", report.overlaps.len()))
            };
            let mut doc = json!({"format": "dpack-validation/1", "tol_rel": p.tol_rel, "balls": p.len()});
            merge(&mut doc, serde_json::to_value(&report).expect("report serializes"));
            Ok(Output::doc(doc).with_status(status))
        }
        PackCmd::Tangency(a) => {
            let p = load(a)?;
            let g = tangency_graph(&p)?;
            Ok(Output::doc(graph_doc(&g, None)))
        }
        PackCmd::Uniformity { input, m } => {
            let p = load(input)?;
            let uni = uniformity_constant(&p)?;
            let m = m.or(uni.value()).unwrap_or(1.0);
            let degree = degree_bound_check(&p, m)?;
            let status = if degree.pass {
                Status::Ok
            } else {
                Status::AssertionFailed(format!("max degree {} exceeds bound {}", degree.max_degree, degree.bound))
            };
            let doc = json!({"format": "dpack-uniformity/1", "uniformity": uni, "degree": degree});
            Ok(Output::doc(doc).with_status(status))
        }
        PackCmd::Census { input, delta, s, mode } => {
            let p = load(input)?;
            let mode = match mode {
                ModeArg::Candidate => SupportMode::Candidate,
                ModeArg::Exact => SupportMode::Exact,
            };
            let census = supported_census(&p.centers(), *delta, s, mode)?;
            let mut plot = Table::new(&["s", "count", "normalized"]);
            for ((s, c), x) in census.s_values.iter().zip(&census.counts).zip(&census.normalized) {
                plot.row(&[s.to_string(), c.to_string(), real(*x)]);
            }
            let mut doc = json!({"format": "dpack-census/1"});
            merge(&mut doc, serde_json::to_value(&census).expect("census serializes"));
            Ok(Output::doc(doc).with_plot(plot.finish()))
        }
        PackCmd::Normalize { input, id } => {
            let p = load(input)?;
            Ok(packing_output(&normalize_packing(&p, *id)?))
        }
    }
}

/// Copies the fields of object `extra` into object `doc`.
pub fn merge(doc: &mut Value, extra: Value) {
    if let (Value::Object(a), Value::Object(b)) = (doc, extra) {
        a.extend(b);
    }
}
