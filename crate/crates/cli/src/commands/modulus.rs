use clap::{Args, Subcommand, ValueEnum};
use dpack_core::modulus::{
    divergence_check, dual_exponent, modulus as solve, vel_certificate, vel_probe, Connector, ModulusOptions, ProbeRoot,
    RootWeight,
};
use dpack_core::Graph;
use serde::Serialize;
use serde_json::{json, Value};

use super::RootedInput;
use crate::docs::{indices_of, metric_json, parse_profile, pick_root, read_graph, real, Table};
use crate::{Failure, GlobalArgs, Output, Status};

#[derive(Args, Debug, Clone, Serialize)]
pub struct SolverArgs {
    /// Exponent `p > 1`.
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Constraint-generation rounds.
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
}

impl SolverArgs {
    fn options(&self) -> ModulusOptions {
        ModulusOptions::new(self.p).with_tol(self.tol).with_max_iter(self.max_iter)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeRootArg {
    Included,
    Excluded,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootWeightArg {
    Profile,
    Zero,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModCmd {
    /// Modulus of the paths from `--source` to `--target`, or from `--root` to distance `--radius + 1`.
    ///
    /// Without either, the path family joins the first and the last vertex of the document.
    Solve {
        #[command(flatten)]
        input: super::Input,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["root", "radius"])]
        source: Vec<u64>,
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["root", "radius"])]
        target: Vec<u64>,
        #[arg(long, requires = "radius")]
        root: Option<u64>,
        #[arg(long)]
        radius: Option<usize>,
        /// Required path length.
        #[arg(long, default_value_t = 1.0)]
        length_bound: f64,
    },
    /// Modulus of paths leaving `Ball(o, R)` for each radius; exits 3 on a certified increase.
    Probe {
        #[command(flatten)]
        input: RootedInput,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<usize>,
        /// Whether the root's weight counts towards path length.
        #[arg(long, value_enum, default_value_t = ProbeRootArg::Included)]
        root_weight: ProbeRootArg,
    },
    /// Layer-metric lower bound on the extremal length of paths from the root to distance `--n + 1`.
    Certificate {
        #[command(flatten)]
        input: RootedInput,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long)]
        n: usize,
        /// `const:V`, `power:C,E`, `table:N=V;…` or `hull`.
        #[arg(long, default_value = "hull")]
        profile: String,
        #[arg(long, value_enum, default_value_t = RootWeightArg::Profile)]
        root_weight: RootWeightArg,
        /// Also solve the modulus and assert `bound ≤ 1/Mod + 1e-6`.
        #[arg(long)]
        check: bool,
    },
    /// Partial sums of `Σ g(n)^{-q}`.
    Divergence {
        /// `const:V`, `power:C,E`, `table:N=V;…`, or `hull` with `--input`.
        #[arg(long)]
        profile: String,
        #[arg(long)]
        input: Option<std::path::PathBuf>,
        #[arg(long)]
        root: Option<u64>,
        #[arg(long)]
        n_max: usize,
        /// Dimension `d`, giving `q = d/(d−1)`.
        #[arg(long, conflicts_with = "q")]
        d: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
    },
}

impl ModCmd {
    pub fn name(&self) -> &'static str {
        match self {
            ModCmd::Solve { .. } => "solve",
            ModCmd::Probe { .. } => "probe",
            ModCmd::Certificate { .. } => "certificate",
            ModCmd::Divergence { .. } => "divergence",
        }
    }
}

fn sphere(g: &Graph, o: usize, r: usize) -> Vec<usize> {
    let depth = g.bfs_distances(&[o]);
    (0..g.len()).filter(|&v| depth[v] == Some(r)).collect()
}

pub fn modulus(cmd: &ModCmd, _global: &GlobalArgs) -> Result<Output, Failure> {
    match cmd {
        ModCmd::Solve { input, solver, source, target, root, radius, length_bound } => {
            let (g, doc_root) = read_graph(&input.input)?;
            if g.is_empty() {
                return Err(Failure::Input("graph has no vertices".into()));
            }
            let (src, dst) = match (radius, source.is_empty(), target.is_empty()) {
                (Some(r), _, _) => {
                    let o = pick_root(&g, *root, doc_root)?;
                    let t = sphere(&g, o, r + 1);
                    if t.is_empty() {
                        return Err(Failure::Input(format!("no vertex at distance {} from the root", r + 1)));
                    }
                    (vec![o], t)
                }
                (None, true, true) => (vec![0], vec![g.len() - 1]),
                (None, false, false) => (indices_of(&g, source, "--source")?, indices_of(&g, target, "--target")?),
                _ => return Err(Failure::Input("--source and --target must be given together".into())),
            };
            let c = Connector::new(&g, src, dst)?;
            let opts = solver.options().with_length_bound(*length_bound);
            let res = solve(&c, &opts)?;
            let status = if res.converged {
                Status::Ok
            } else {
                Status::NotConverged(format!("{} rounds", res.iterations))
            };
            let paths: Vec<Vec<u64>> = res
                .active_paths
                .iter()
                .map(|p| p.iter().map(|&v| g.label(v)).collect())
                .collect();
            let doc = json!({
                "format": "dpack-modulus/1",
                "p": res.p,
                "value": res.value,
                "lower_bound": res.lower_bound,
                "vel": res.vel,
                "metric": metric_json(&g, &res.metric),
                "active_paths": paths,
                "iterations": res.iterations,
                "converged": res.converged,
                "tol": res.tol,
                "length_bound": res.length_bound,
                "min_path_length": res.min_path_length,
                "source": c.source.iter().map(|&v| g.label(v)).collect::<Vec<_>>(),
                "target": c.target.iter().map(|&v| g.label(v)).collect::<Vec<_>>(),
            });
            Ok(Output::doc(doc).with_status(status))
        }
        ModCmd::Probe { input, solver, radii, root_weight } => {
            let (g, doc_root) = read_graph(&input.input.input)?;
            let o = pick_root(&g, input.root, doc_root)?;
            let root = match root_weight {
                ProbeRootArg::Included => ProbeRoot::Included,
                ProbeRootArg::Excluded => ProbeRoot::Excluded,
            };
            let report = vel_probe(&g, o, radii, &solver.options(), root)?;
            let mut plot = Table::new(&["radius", "value", "lower_bound"]);
            for r in &report.rows {
                plot.row(&[r.radius.to_string(), real(r.value), real(r.lower_bound)]);
            }
            let status = if let Some(r) = report.rows.iter().find(|r| !r.converged) {
                Status::NotConverged(format!("radius {}", r.radius))
            } else if !report.monotone {
                Status::AssertionFailed("modulus increased with the radius".into())
            } else {
                Status::Ok
            };
            let mut doc = serde_json::to_value(&report).expect("report serializes");
            let weight = doc["root"].take();
            super::pack::merge(
                &mut doc,
                json!({"format": "dpack-probe/1", "root": g.label(o), "root_weight": weight}),
            );
            Ok(Output::doc(doc).with_plot(plot.finish()).with_status(status))
        }
        ModCmd::Certificate { input, p, n, profile, root_weight, check } => {
            let (g, doc_root) = read_graph(&input.input.input)?;
            let o = pick_root(&g, input.root, doc_root)?;
            let prof = parse_profile(profile, Some((&g, o)))?;
            let rw = match root_weight {
                RootWeightArg::Profile => RootWeight::Profile,
                RootWeightArg::Zero => RootWeight::Zero,
            };
            let cert = vel_certificate(&g, o, &prof, *n, *p, rw)?;
            let mut status = Status::Ok;
            let mut comparison = Value::Null;
            if *check {
                let c = Connector::new(&g, vec![o], sphere(&g, o, n + 1))?;
                let res = solve(&c, &ModulusOptions::new(*p))?;
                let vel = 1.0 / res.value;
                if !res.converged {
                    status = Status::NotConverged(format!("{} rounds", res.iterations));
                } else if cert.bound > vel + 1e-6 {
                    status = Status::AssertionFailed(format!("bound {} exceeds extremal length {vel}", cert.bound));
                }
                comparison = json!({"modulus": res.value, "vel": vel, "sound": cert.bound <= vel + 1e-6});
            }
            Ok(Output::doc(json!({
                "format": "dpack-certificate/1",
                "root": g.label(o),
                "profile": prof,
                "p": cert.p,
                "n": cert.n,
                "layer_sizes": cert.layer_sizes,
                "weights": cert.weights,
                "length": cert.length,
                "energy": cert.energy,
                "bound": cert.bound,
                "metric": metric_json(&g, &cert.metric),
                "check": comparison,
            }))
            .with_status(status))
        }
        ModCmd::Divergence { profile, input, root, n_max, d, q } => {
            let graph = match input {
                Some(path) => {
                    let (g, doc_root) = read_graph(path)?;
                    let o = pick_root(&g, *root, doc_root)?;
                    Some((g, o))
                }
                None => None,
            };
            let prof = parse_profile(profile, graph.as_ref().map(|(g, o)| (g, *o)))?;
            let q = match (d, q) {
                (Some(d), None) if *d > 1.0 => dual_exponent(*d),
                (Some(_), None) => return Err(Failure::Input("--d must exceed 1".into())),
                (None, Some(q)) => *q,
                _ => return Err(Failure::Input("give --d or --q".into())),
            };
            let report = divergence_check(&prof, *n_max, q)?;
            let mut plot = Table::new(&["n", "partial_sum"]);
            for (n, s) in &report.partial_sums {
                plot.row(&[n.to_string(), real(*s)]);
            }
            let mut doc = json!({"format": "dpack-divergence/1", "profile": prof});
            super::pack::merge(&mut doc, serde_json::to_value(&report).expect("report serializes"));
            Ok(Output::doc(doc).with_plot(plot.finish()))
        }
    }
}
