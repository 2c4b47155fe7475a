//! Tessellated quantum search on a cyclic two-dimensional grid.
//!
//! A real state vector over an `L×L` torus is driven by a marked-cell oracle
//! and two partition diffusions: a local one over aligned `d×d` tiles and a
//! dispersion one over the same tiles shifted by `⌊d/2⌋`. The crate also
//! carries a global-Grover reference, trace analysis, and file emitters for
//! traces, snapshots, partitions and heatmaps.

pub mod analysis;
pub mod error;
pub mod io;
pub mod operators;
pub mod simulator;
pub mod state;
pub mod tessellation;

pub use error::{Error, Result};
pub use operators::{DiffusionSpec, OracleSpec};
pub use simulator::{run, run_grover_reference, Order, RunConfig, SimulationTrace};
pub use state::{Coord, GridGeometry, GridState, MarkedSet};
pub use tessellation::{Partition, PartitionKind};
