//! Packings and graphs with known ground truth.
//!
//! Every generator is deterministic in its parameters (and seed, where one is taken).
//! Lattice-indexed objects number their vertices by linear index with the first
//! coordinate varying fastest, so a ball of [`cubic_lattice_packing`] and the
//! matching vertex of [`grid_graph`] share an id.

mod apollonian;
mod lattice;
mod random;
mod triangulation;

pub use apollonian::{apollonian_gasket, descartes_residual, ApollonianGasket, Circle};
pub use lattice::{complete_graph, cubic_lattice_packing, cycle_graph, grid_graph, hexagonal_packing, regular_tree};
pub use random::{random_connected_graph, random_tangent_packing};
pub use triangulation::{disk_triangulation_pack, hex_disk_triangulation, CirclePackResult, DiskTriangulation, PackOptions};
