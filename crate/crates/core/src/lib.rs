//! Certificates for implicational tautologies.
//!
//! Graphs are reduced to implication-only formulas that are valid exactly when
//! the graph has no Hamiltonian cycle. Valid formulas get normal natural
//! deduction proofs, which are compressed into leveled proof DAGs and checked
//! with an instrumented, trace-producing verifier.

pub mod compression;
pub mod corpus;
pub mod dagcheck;
pub mod formula;
pub mod graph;
pub mod intern;
pub mod ndproof;
pub mod pipeline;
pub mod prover;
pub mod reduction;
pub mod stats;
mod textio;

pub use formula::Formula;
pub use graph::Graph;
pub use ndproof::NdProof;
pub use textio::SerialError;

/// Growth fit over `f64` measurements.
pub type GrowthFit = stats::GrowthFit<f64>;
