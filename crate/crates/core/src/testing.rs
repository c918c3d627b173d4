#![allow(dead_code)]

pub use crate::fixtures::cycle;
pub use crate::scalar::Scalar;
pub use num_traits::Signed;
pub use crate::vset::VertexSet;
pub use crate::{CapGraph, Rational};

pub fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

pub fn qq(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

pub fn vs(vertices: &[usize]) -> VertexSet {
    vertices.iter().copied().collect()
}

/// `{0} ∪ {i+1 : bit i of rest}`.
pub fn shore_with_zero(rest: u64, n: usize) -> VertexSet {
    let mut s = VertexSet::singleton(0);
    s.extend((1..n).filter(|&v| rest >> (v - 1) & 1 == 1));
    s
}
