use clap::Subcommand;
use dpack_core::generators::{
    apollonian_gasket, complete_graph, cubic_lattice_packing, cycle_graph, disk_triangulation_pack, grid_graph,
    hex_disk_triangulation, hexagonal_packing, random_connected_graph, random_tangent_packing, regular_tree, PackOptions,
};
use dpack_core::Graph;
use serde::Serialize;

use super::pack::packing_output;
use super::require_seed;
use crate::docs::graph_doc;
use crate::{Failure, GlobalArgs, Output, Status};

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenCmd {
    /// Unit-diameter balls on the integer grid `{0..side-1}^d`.
    CubicLattice {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        side: usize,
    },
    /// Unit disks in a `rows × cols` hexagonal arrangement.
    Hexagonal {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
    /// Apollonian gasket inside the unit circle, to the given depth.
    Apollonian {
        #[arg(long)]
        depth: usize,
    },
    /// Random connected tangent packing (needs --seed).
    RandomPacking {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
    },
    /// Circle packing of the hexagonal disk triangulation with `--rings` rings.
    DiskPack {
        #[arg(long)]
        rings: usize,
        #[arg(long, default_value_t = 1.0)]
        boundary_radius: f64,
    },
    /// Grid graph `{0..side-1}^d`, rooted at its centre.
    Grid {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        side: usize,
    },
    /// Path on `n` vertices.
    Path {
        #[arg(long)]
        n: usize,
    },
    /// Tree with `k` children at the root and `k − 1` below, to `depth`.
    Tree {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        depth: usize,
    },
    Cycle {
        #[arg(long)]
        n: usize,
    },
    Complete {
        #[arg(long)]
        n: usize,
    },
    /// Random connected graph: a random recursive tree plus each other edge with probability `extra` (needs --seed).
    RandomGraph {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        extra: f64,
    },
}

impl GenCmd {
    pub fn name(&self) -> &'static str {
        match self {
            GenCmd::CubicLattice { .. } => "cubic-lattice",
            GenCmd::Hexagonal { .. } => "hexagonal",
            GenCmd::Apollonian { .. } => "apollonian",
            GenCmd::RandomPacking { .. } => "random-packing",
            GenCmd::DiskPack { .. } => "disk-pack",
            GenCmd::Grid { .. } => "grid",
            GenCmd::Path { .. } => "path",
            GenCmd::Tree { .. } => "tree",
            GenCmd::Cycle { .. } => "cycle",
            GenCmd::Complete { .. } => "complete",
            GenCmd::RandomGraph { .. } => "random-graph",
        }
    }
}

fn graph_output(g: &Graph, root: Option<usize>) -> Output {
    Output::doc(graph_doc(g, root))
}

pub fn generate(cmd: &GenCmd, global: &GlobalArgs) -> Result<Output, Failure> {
    Ok(match cmd {
        GenCmd::CubicLattice { d, side } => packing_output(&cubic_lattice_packing(*d, *side)?),
        GenCmd::Hexagonal { rows, cols } => packing_output(&hexagonal_packing(*rows, *cols)?),
        GenCmd::Apollonian { depth } => packing_output(&apollonian_gasket(*depth)?.packing()),
        GenCmd::RandomPacking { d, n } => {
            packing_output(&random_tangent_packing(*d, *n, require_seed(global.seed, "gen random-packing")?)?)
        }
        GenCmd::DiskPack { rings, boundary_radius } => {
            let t = hex_disk_triangulation(*rings)?;
            let res = disk_triangulation_pack(&t, &[*boundary_radius], &PackOptions::default())?;
            let status = if res.converged {
                Status::Ok
            } else {
                Status::NotConverged(format!("angle deviation {} after {} rounds", res.max_deviation, res.rounds))
            };
            packing_output(&res.packing).with_status(status)
        }
        GenCmd::Grid { d, side } => {
            let g = grid_graph(*d, *side)?;
            let centre = (0..*d).fold(0, |acc, _| acc * side + side / 2);
            graph_output(&g, Some(centre))
        }
        GenCmd::Path { n } => graph_output(&grid_graph(1, *n)?, None),
        GenCmd::Tree { k, depth } => graph_output(&regular_tree(*k, *depth)?, Some(0)),
        GenCmd::Cycle { n } => graph_output(&cycle_graph(*n)?, None),
        GenCmd::Complete { n } => graph_output(&complete_graph(*n)?, None),
        GenCmd::RandomGraph { n, extra } => graph_output(
            &random_connected_graph(*n, *extra, require_seed(global.seed, "gen random-graph")?)?,
            None,
        ),
    })
}
