//! Capacity perturbation that makes every cut value distinct.
//!
//! Edge `i` of an `m`-edge graph gets `2^i / (2^{2m}·D)` added to its
//! finite capacity, where `D` is the least common denominator of the input
//! capacities. Distinct edge subsets then have distinct perturbation sums,
//! and the total added to any cut stays below `2^{-m}/D`, which is strictly
//! less than the spacing `1/D` of the original cut values. So the original
//! order of cuts is kept, ties are broken, and original values come back
//! by rounding down to the `1/D` grid.

use num_traits::One;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::{Capacity, Scalar};

/// Least common denominator of the finite capacity components.
pub fn grid_denominator<C: Capacity>(g: &Graph<C>) -> C::Field {
    g.edges().iter().fold(C::Field::one(), |acc, e| {
        acc.lcm_integral(&e.capacity.finite_part().denominator_value())
    })
}

/// The amount added to edge `index` of an `m`-edge graph on grid `grid`.
pub fn edge_epsilon<S: Scalar>(index: usize, m: usize, grid: &S) -> S {
    S::pow2(index as u32) / (S::pow2(2 * m as u32) * grid.clone())
}

/// Returns a copy of `g` with perturbed capacities; edge ids are unchanged.
pub fn perturb<C: Capacity>(g: &Graph<C>) -> Result<Graph<C>> {
    if g.m() == 0 {
        return Err(Error::NoEdges);
    }
    let m = g.m();
    let grid = grid_denominator(g);
    Ok(g.map_capacities(|e| e.capacity.shift_finite(&edge_epsilon(e.id, m, &grid))))
}

/// Rounds `value` down to the nearest multiple of `1/grid`.
pub fn deperturb<S: Scalar>(value: &S, grid: &S) -> S {
    (value.clone() * grid.clone()).floor() / grid.clone()
}

/// [`deperturb`] applied to the finite component of a capacity.
pub fn deperturb_capacity<C: Capacity>(value: &C, grid: &C::Field) -> C {
    value.map_finite(|x| deperturb(x, grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{k23, U1, U2};
    use crate::testing::*;
    use crate::vset::VertexSet;
    use std::collections::BTreeSet;

    #[test]
    fn triangle_gets_distinct_powers_of_two() {
        let g = cycle(3);
        let p = perturb(&g).unwrap();
        for e in p.edges() {
            let expected = q(1) + Rational::pow2(e.id as u32) / Rational::pow2(6);
            assert_eq!(e.capacity, expected);
        }
        let singles: BTreeSet<_> = (0..3)
            .map(|v| p.cut_capacity(&VertexSet::singleton(v)).unwrap())
            .collect();
        assert_eq!(singles.len(), 3);
    }

    #[test]
    fn empty_graph_is_rejected() {
        let g = CapGraph::new(2, Vec::new(), vec![]).unwrap();
        assert_eq!(perturb(&g).unwrap_err(), Error::NoEdges);
    }

    #[test]
    fn k23_cuts_become_pairwise_distinct() {
        let p = perturb(&k23()).unwrap();
        // shores containing vertex 0, excluding the full set: 2^4 - 1 of them
        let values: Vec<_> = (0u64..15)
            .map(|rest| p.cut_capacity(&shore_with_zero(rest, 5)).unwrap())
            .collect();
        let distinct: BTreeSet<_> = values.iter().cloned().collect();
        assert_eq!(distinct.len(), values.len());

        let min_u1u2: Vec<_> = (0u64..15)
            .map(|rest| shore_with_zero(rest, 5))
            .filter(|s| s.contains(U1) && !s.contains(U2))
            .map(|s| (p.cut_capacity(&s).unwrap(), s))
            .collect();
        let best = min_u1u2.iter().map(|(c, _)| c.clone()).min().unwrap();
        assert_eq!(min_u1u2.iter().filter(|(c, _)| *c == best).count(), 1);
        assert_eq!(deperturb(&best, &q(1)), q(3));
    }

    #[test]
    fn grid_handles_mixed_denominators() {
        let g = CapGraph::new(3, vec![(0, 1, qq(1, 6)), (1, 2, qq(3, 4))], vec![]).unwrap();
        assert_eq!(grid_denominator(&g), q(12));
        let p = perturb(&g).unwrap();
        for (e, f) in g.edges().iter().zip(p.edges()) {
            assert!(f.capacity > e.capacity);
            assert_eq!(deperturb(&f.capacity, &q(12)), e.capacity);
        }
    }
}
