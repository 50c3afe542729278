//! Parallel chip-firing games on finite connected graphs.
//!
//! Each round, every vertex holding at least as many chips as it has
//! neighbors fires one chip to each neighbor simultaneously; all other
//! vertices wait. Every such game is eventually periodic. This crate
//! simulates games, detects transients and minimal periods, analyzes firing
//! sequences, constructs and certifies chip assignments for compliant games,
//! implements conjugate configurations on complete bipartite graphs
//! `K_{a,a}`, and runs exhaustive/sampled verification sweeps over
//! configuration spaces at desk scale.

pub mod analysis;
pub mod assignment;
pub mod bipartite;
pub mod engine;
pub mod graph;
pub mod report;
pub mod sweep;

pub use engine::{ChipConfig, CycleSummary};
pub use graph::{EdgeId, Graph};
