//! Exact Gomory-Hu trees and what they say about graph structure.
//!
//! The crate builds Gomory-Hu trees and terminal trees (with bags) over
//! exact rationals, decides whether such a tree sits inside its graph as a
//! subgraph, bag minor or weak bag minor, searches for terminal minors
//! (`K₂,₃`, `K₄`, `K₄⁺`, cycles), generates outerplanar / 1-sum / web
//! instances, and checks multicommodity-flow feasibility against the cut
//! condition with an exact simplex.
//!
//! All algorithms are generic over [`Capacity`] / [`Scalar`]; the aliases
//! below fix the usual arbitrary-precision choice.

pub mod embedding;
pub mod error;
pub mod fixtures;
pub mod gomory_hu;
pub mod graph;
pub mod instances;
pub mod io;
pub mod lp;
pub mod mincut;
pub mod minors;
pub mod multiflow;
pub mod perturb;
pub mod rng;
pub mod scalar;
pub mod suite;
pub mod vset;

#[cfg(test)]
mod testing;

pub use error::{Error, Result};
pub use graph::{Block, Cut, Edge, Graph};
pub use scalar::{Capacity, Scalar, Tiered};
pub use vset::VertexSet;

/// Arbitrary-precision rational; the default scalar.
pub type Rational = num_rational::BigRational;
/// Capacity with a symbolic infinite tier over [`Rational`].
pub type TieredRational = Tiered<Rational>;
/// Graph with rational capacities.
pub type CapGraph = Graph<Rational>;
/// Graph whose capacities may be infinite.
pub type TieredGraph = Graph<TieredRational>;
pub type GhTree = gomory_hu::GomoryHuTree<Rational>;
pub type TieredGhTree = gomory_hu::GomoryHuTree<TieredRational>;
pub type MultiflowInstance = multiflow::MultiflowInstance<Rational>;
pub type TieredMultiflowInstance = multiflow::MultiflowInstance<TieredRational>;
