//! Event-driven simulator and experiment harness for the edge-averaging
//! (randomized gossip) process on finite connected graphs.
//!
//! Each edge of a graph carries an independent unit-rate Poisson clock;
//! when an edge rings, the two endpoint opinions are replaced by their
//! average. The crate simulates this process exactly (clocks by
//! superposition, one event at a time), tracks the oscillation to detect
//! epsilon-consensus times, evolves the dual mass-transport objects (the
//! fragmentation vector and the doubly stochastic transport matrix), and
//! runs seeded Monte-Carlo experiments for consensus-time scaling in the
//! graph size and the threshold.
//!
//! All numeric types are generic over [`scalar::Real`] (`f32` or `f64`);
//! `f64` is the default type parameter everywhere and the [`Scalar`] alias
//! the command line uses.

pub mod distributions;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod fragmentation;
pub mod graph;
pub mod scalar;
pub mod seed;
pub mod verify;

/// Default scalar precision for simulations and the CLI.
pub type Scalar = f64;

/// Opinion trajectory at default precision.
pub type OpinionState = dynamics::OpinionState<Scalar>;
/// Consensus-run result at default precision.
pub type ConsensusResult = dynamics::ConsensusResult<Scalar>;
/// Mass vector at default precision.
pub type MassVector = fragmentation::MassVector<Scalar>;
/// Transport matrix at default precision.
pub type MassMatrix = fragmentation::MassMatrix<Scalar>;
/// Initial-opinion law at default precision.
pub type DistributionSpec = distributions::DistributionSpec<Scalar>;

pub use error::{Error, Result};
pub use graph::Graph;
