//! Small named graphs used throughout the tests and by the CLI.
//!
//! `K₂,₃` is numbered `u₁ = 0, u₂ = 1, v₁ = 2, v₂ = 3, v₃ = 4`.

use crate::scalar::Scalar;
use crate::{CapGraph, Rational};

pub const U1: usize = 0;
pub const U2: usize = 1;
pub const V1: usize = 2;
pub const V2: usize = 3;
pub const V3: usize = 4;

fn unit(n: usize, pairs: &[(usize, usize)]) -> CapGraph {
    let edges = pairs.iter().map(|&(u, v)| (u, v, Rational::from_int(1)));
    CapGraph::new(n, edges, (0..n).collect()).expect("fixture is well formed")
}

/// `K₂,₃` with unit capacities; every vertex is a terminal.
pub fn k23() -> CapGraph {
    unit(5, &[(U1, V1), (U1, V2), (U1, V3), (U2, V1), (U2, V2), (U2, V3)])
}

/// `K₃,₃` with unit capacities; sides `{0,1,2}` and `{3,4,5}`.
pub fn k33() -> CapGraph {
    let pairs: Vec<_> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
    unit(6, &pairs)
}

pub fn k4() -> CapGraph {
    unit(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

/// The cycle `0-1-...-(n-1)-0` with unit capacities.
pub fn cycle(n: usize) -> CapGraph {
    let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    unit(n, &pairs)
}

/// A path `0-1-...-(n-1)` with the given capacities.
pub fn path(caps: &[Rational]) -> CapGraph {
    let edges = caps.iter().enumerate().map(|(i, c)| (i, i + 1, c.clone()));
    CapGraph::new(caps.len() + 1, edges, (0..=caps.len()).collect()).expect("path is well formed")
}
