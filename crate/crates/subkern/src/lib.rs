//! Subgraph detection, disjoint packing, and polynomial kernelization.
//!
//! The library is organized around a small simple-graph core:
//!
//! * [`graph`] — graphs, partial subgraph models, separations, text I/O
//! * [`families`] — deterministic constructors for the named pattern families
//! * [`recognize`] — split certificates (small/thin/matching-splittable patterns)
//! * [`matching`] — randomized exact-weight and colored matching engine
//! * [`detect`] — polynomial-time subgraph detection for splittable patterns
//! * [`repsets`] — representative host-vertex sets that preserve extendability
//! * [`kernel`] — packing, subgraph, and Turing kernelization
//! * [`reduce`] — hardness reductions as verified instance generators
//! * [`oracle`] — brute-force reference solvers used for validation

pub mod error;
pub mod graph;
pub mod oracle;
pub mod families;
pub mod recognize;
pub mod matching;
pub mod detect;
pub mod repsets;
pub mod kernel;
pub mod reduce;

pub use error::{Error, Result};
pub use graph::Graph;
