//! Plane-graph structure, goodness and chain decompositions used to build
//! spanning bipartite cactuses and Hamilton cycles in prisms.

pub mod cactus;
pub mod chains;
pub mod diagnostics;
pub mod embed;
pub mod error;
pub mod fixtures;
pub mod goodness;
pub mod oracle;
pub mod prism;
pub mod par;
pub mod structure;

pub use embed::{edge, Edge, Face, PlaneGraph, Vertex};
pub use error::*;
