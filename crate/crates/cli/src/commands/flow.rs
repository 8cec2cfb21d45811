use std::path::PathBuf;

use clap::{Args, Subcommand};
use dpack_core::flow::{verify_flow_inequalities, FlowDocument, WetnessProcess};
use dpack_core::graph::vertex_boundary;
use dpack_core::modulus::{lower_envelope, Profile, VertexMetric};
use dpack_core::Graph;
use serde::Serialize;
use serde_json::json;

use super::RootedInput;
use crate::docs::{metric_json, parse_profile, pick_root, read_graph, read_metric, real, Table};
use crate::{Failure, GlobalArgs, Output, Status};

#[derive(Args, Debug, Clone, Serialize)]
pub struct MetricArgs {
    #[command(flatten)]
    pub input: RootedInput,
    /// Document with a `metric` array, such as a `mod solve` result.
    #[arg(long, conflicts_with = "uniform")]
    pub metric: Option<PathBuf>,
    /// Constant metric value (default `1/|V|`).
    #[arg(long)]
    pub uniform: Option<f64>,
    /// Raise metric values below this floor to it, keeping the metric positive.
    #[arg(long, default_value_t = 1e-9)]
    pub floor: f64,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowCmd {
    /// Wetting intervals and the curve `s(h)`.
    Explore(MetricArgs),
    /// Check the flow inequalities at every linearity midpoint; exits 3 on a violation.
    Verify {
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, default_value_t = 2.0)]
        d: f64,
        /// `const:V`, `power:C,E`, `table:N=V;…`, `hull`, or `wet`: the lower
        /// envelope of `(|W_h|, |∂W_h|)` over the process itself.
        #[arg(long, default_value = "wet")]
        profile: String,
    },
}

impl FlowCmd {
    pub fn name(&self) -> &'static str {
        match self {
            FlowCmd::Explore(_) => "explore",
            FlowCmd::Verify { .. } => "verify",
        }
    }
}

fn process(a: &MetricArgs) -> Result<(Graph, WetnessProcess), Failure> {
    let (g, doc_root) = read_graph(&a.input.input.input)?;
    let o = pick_root(&g, a.input.root, doc_root)?;
    let m = match (&a.metric, a.uniform) {
        (Some(path), _) => read_metric(path, &g)?,
        (None, Some(x)) => VertexMetric::uniform(g.len(), x)?,
        (None, None) => VertexMetric::uniform(g.len(), 1.0 / g.len() as f64)?,
    };
    if !(a.floor > 0.0) {
        return Err(Failure::Input("--floor must be positive".into()));
    }
    let proc = WetnessProcess::new(&g, &m.floored(a.floor), o)?;
    Ok((g, proc))
}

fn wet_envelope(g: &Graph, proc: &WetnessProcess) -> Result<Profile, Failure> {
    let mut samples = Vec::new();
    for h in proc.midpoints() {
        let (wet, _) = proc.wet_sets(h);
        if wet.is_empty() {
            continue;
        }
        let b = vertex_boundary(g, &wet)?.len();
        if b > 0 {
            samples.push((wet.len(), b as f64));
        }
    }
    if samples.is_empty() {
        return Ok(Profile::constant(1.0));
    }
    Ok(lower_envelope(&samples)?)
}

fn curve_plot(proc: &WetnessProcess) -> String {
    let mut t = Table::new(&["h", "s"]);
    for (h, s) in proc.breakpoints.iter().zip(&proc.s_values) {
        t.row(&[real(*h), real(*s)]);
    }
    t.finish()
}

pub fn flow(cmd: &FlowCmd, _global: &GlobalArgs) -> Result<Output, Failure> {
    match cmd {
        FlowCmd::Explore(a) => {
            let (g, proc) = process(a)?;
            let mut doc = serde_json::to_value(FlowDocument::new(&proc, None)).expect("flow document serializes");
            super::pack::merge(
                &mut doc,
                json!({
                    "root": g.label(proc.root),
                    "metric": metric_json(&g, &proc.metric),
                    "distances": proc.distances,
                }),
            );
            Ok(Output::doc(doc).with_plot(curve_plot(&proc)))
        }
        FlowCmd::Verify { metric, d, profile } => {
            let (g, proc) = process(metric)?;
            let prof = if profile == "wet" {
                wet_envelope(&g, &proc)?
            } else {
                parse_profile(profile, Some((&g, proc.root)))?
            };
            let report = verify_flow_inequalities(&g, &proc, &prof, *d)?;
            let status = if !report.violations.is_empty() {
                Status::AssertionFailed(format!("{} midpoints violate an asserted check", report.violations.len()))
            } else if !report.integral_ok {
                Status::AssertionFailed(format!("integral {} differs from energy {}", report.integral, report.energy))
            } else {
                Status::Ok
            };
            let mut doc = serde_json::to_value(FlowDocument::new(&proc, Some(&report))).expect("flow document serializes");
            super::pack::merge(
                &mut doc,
                json!({
                    "root": g.label(proc.root),
                    "d": report.d,
                    "profile": prof,
                    "premise_holds": report.premise_holds,
                    "violations": report.violations,
                    "integral": report.integral,
                    "energy": report.energy,
                    "integral_ok": report.integral_ok,
                    "all_pass": report.all_pass,
                }),
            );
            Ok(Output::doc(doc).with_plot(curve_plot(&proc)).with_status(status))
        }
    }
}
