//! Desk-scale computations around sphere packings and the potential theory
//! of their tangency graphs.
//!
//! The crate is organised by subsystem:
//!
//! - [`geometry`]: d-dimensional ball packings, validation, tangency graphs,
//!   uniformity constants and the isolation-radius / supported-point census.
//! - [`graph`]: rooted graphs, combinatorial balls, rooted isomorphism and
//!   canonical forms, the Benjamini–Schramm distance, hull sequences,
//!   Cheeger constants and isoperimetric profiles.
//! - [`modulus`]: vertex p-modulus of path families by constraint generation,
//!   a brute-force oracle, parabolicity probes and layer certificates.
//! - [`flow`]: the water-flow exploration of a vertex metric and a checker
//!   for the isoperimetric inequalities it satisfies.
//! - [`generators`]: packings and graphs with known ground truth.
//!
//! # Example
//!
//! ```
//! use dpack_core::generators::grid_graph;
//! use dpack_core::modulus::{modulus, Connector, ModulusOptions};
//!
//! // P_5 end to end: the extremal metric is uniform and Mod_2 = 1/5.
//! let path = grid_graph(1, 5).unwrap();
//! let conn = Connector::new(&path, vec![0], vec![4]).unwrap();
//! let res = modulus(&conn, &ModulusOptions::new(2.0)).unwrap();
//! assert!((res.value - 0.2).abs() < 1e-9);
//! ```

pub mod error;
pub mod flow;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod modulus;

pub use error::{Error, Result};
pub use geometry::{Ball, Packing, SupportMode, SupportedCensus, ValidationReport};
pub use graph::{Graph, HullSequence, RootedGraph, VertexId};
pub use modulus::{Connector, ModulusOptions, ModulusResult, Profile, VertexMetric};
