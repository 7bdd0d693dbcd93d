//! Block-based coded broadcast with receiver side information: instance
//! models, GF(2^m) decoding simulation, schedule heuristics, exhaustive
//! oracles for small instances, and a deterministic experiment runner.
//!
//! The delay metric throughout is the average per-packet decoding delay:
//! the mean, over all (receiver, wanted packet) pairs, of the transmission
//! index at which that packet is first decodable. All delay arithmetic is
//! exact (`Ratio<u64>`); floats appear only when rendering CSV.

pub mod error;
pub mod experiment;
pub mod generators;
pub mod gf;
pub mod instance;
pub mod oracle;
pub mod sched;
pub mod sim;
#[cfg(test)]
pub(crate) mod testutil;

pub use error::Error;
pub use gf::{CodedVector, Field, FieldElement, FieldMatrix};
pub use instance::{DemandHypergraph, Hyperedge, PacketId, StateFeedbackMatrix};
pub use sched::{ConflictGraph, MisPartition, MwisMode, SchedulerSpec};
pub use sim::{simulate, Apdd, CoefficientPolicy, DecodeReport, Schedule};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
