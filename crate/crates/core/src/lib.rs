//! Matchings in k-uniform hypergraphs.

pub mod absorbing;
pub mod closeness;
pub mod combinatorics;
pub mod constructions;
pub mod error;
pub mod exact;
pub mod fractional;
pub mod generators;
pub mod hypergraph;
pub mod io;
pub mod pipeline;
pub mod rng;
mod simplex;
pub mod stability;
pub mod suites;
pub mod sweep;

pub use error::{Error, Guard, Result};
pub use hypergraph::{Hypergraph, Vertex, VertexSet};
