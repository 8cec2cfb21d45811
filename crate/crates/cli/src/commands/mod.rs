mod flow;
mod gen;
mod graph;
mod modulus;
mod pack;

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

pub use flow::{flow, FlowCmd};
pub use gen::{generate, GenCmd};
pub use graph::{graph, GraphCmd};
pub use modulus::{modulus, ModCmd};
pub use pack::{pack, PackCmd};

/// A single input document.
#[derive(Args, Debug, Clone, Serialize)]
pub struct Input {
    /// Input document (`-` for standard input).
    #[arg(long)]
    pub input: PathBuf,
}

/// Input plus root selection for rooted computations.
#[derive(Args, Debug, Clone, Serialize)]
pub struct RootedInput {
    #[command(flatten)]
    pub input: Input,
    /// Root vertex id; defaults to the document's root, then to the first vertex.
    #[arg(long)]
    pub root: Option<u64>,
}

pub(crate) fn require_seed(seed: Option<u64>, what: &str) -> Result<u64, crate::Failure> {
    seed.ok_or_else(|| crate::Failure::Input(format!("{what} samples randomly and needs --seed")))
}
