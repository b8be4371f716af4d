//! Parallel primal-dual solver for the minimum-cost multicut problem
//! (a.k.a. correlation clustering).
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] holds the instance types, the text format and objective evaluation.
//! * [`contraction`] is the primal side: contraction mappings, the sparse
//!   relabel/sort/reduce contraction and the edge-selection strategies.
//! * [`dual`] is the dual side: conflicted-cycle separation, triplet
//!   decomposition, message passing and lower bounds.
//! * [`solver`] drives both in the interleaved primal-dual loop.
//! * [`oracle`] contains slow, independent reference implementations used by tests.
//! * [`generate`] and [`report`] back the command line tool.

pub mod contraction;
mod dsu;
pub mod dual;
pub mod error;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod report;
pub mod solver;

pub use error::{Error, Result};
pub use graph::{Edge, Labeling, SparseAdjacency, WeightedGraph};

pub use solver::{dual_bound, solve, Mode, Solution, SolverConfig};
