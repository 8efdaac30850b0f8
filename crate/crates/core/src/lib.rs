//! Dynamic programming over rooted layouts driven by d-neighbor equivalence
//! classes and GF(2) representative sets.

pub mod error;
pub mod gf2;
pub mod graph;
pub mod layout;
pub mod nec;
pub mod problem;
pub mod solve;
pub mod connected;
pub mod acyclic;
pub mod cut;
pub mod represent;
pub mod testkit;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
