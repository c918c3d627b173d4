//! Gomory-Hu trees and terminal trees with bags.
//!
//! Construction is the classical split procedure: keep a tree of
//! supernodes, pick a supernode holding two terminals, contract every
//! subtree hanging off it, cut the two terminals apart by max-flow and
//! split the supernode along that cut. When every supernode holds exactly
//! one terminal the supernodes are the bags.
//!
//! Inputs are perturbed first (see [`crate::perturb`]) so every minimum cut
//! is unique; the tree is then the unique Gomory-Hu tree of the perturbed
//! graph, and reported capacities are recomputed on the original graph.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::mincut::max_flow;
use crate::perturb::perturb;
use crate::scalar::Capacity;
use crate::vset::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeEdge<C> {
    pub a: usize,
    pub b: usize,
    /// Capacity of the fundamental cut in the input graph.
    pub capacity: C,
    /// Value used for comparisons between tree edges. Equal to `capacity`
    /// unless the tree was built on a perturbed copy.
    pub perturbed_capacity: C,
    /// The side of the fundamental cut containing `a`.
    pub shore: VertexSet,
}

/// A Gomory-Hu terminal tree. With `terminals = V` every bag is a
/// singleton and this is an ordinary Gomory-Hu tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GomoryHuTree<C> {
    pub n: usize,
    pub terminals: Vec<usize>,
    /// Owning terminal of every vertex.
    pub bag_of: Vec<usize>,
    pub edges: Vec<TreeEdge<C>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GhOptions {
    /// Build on a perturbed copy so that minimum cuts are unique.
    pub perturb: bool,
}

impl Default for GhOptions {
    fn default() -> Self {
        Self { perturb: true }
    }
}

struct Supernode {
    vertices: VertexSet,
    terminals: Vec<usize>,
}

/// Builds the Gomory-Hu `z`-tree of `g` on a perturbed copy.
pub fn build_gh_tree<C: Capacity>(g: &Graph<C>, z: &[usize]) -> Result<GomoryHuTree<C>> {
    build_gh_tree_with(g, z, GhOptions::default())
}

pub fn build_gh_tree_with<C: Capacity>(
    g: &Graph<C>,
    z: &[usize],
    opts: GhOptions,
) -> Result<GomoryHuTree<C>> {
    if z.len() < 2 {
        return Err(Error::Invalid("a terminal tree needs at least two terminals".into()));
    }
    let mut seen = VertexSet::new();
    for &t in z {
        if t >= g.n() {
            return Err(Error::VertexOutOfRange(t));
        }
        if !seen.insert(t) {
            return Err(Error::DuplicateTerminal(t));
        }
    }
    g.ensure_connected()?;
    let work = if opts.perturb { perturb(g)? } else { g.clone() };

    let mut nodes = vec![Supernode {
        vertices: VertexSet::full(g.n()),
        terminals: z.to_vec(),
    }];
    // (supernode, supernode, flow value in `work`)
    let mut tree: Vec<(usize, usize, C)> = Vec::new();

    while let Some(x) = nodes.iter().position(|s| s.terminals.len() >= 2) {
        let mut ts = nodes[x].terminals.clone();
        ts.sort_unstable();
        let (s, t) = (ts[0], ts[1]);

        // label 0.. for vertices of X, then one label per hanging subtree
        let mut label = vec![usize::MAX; g.n()];
        let inside: Vec<usize> = nodes[x].vertices.to_vec();
        for (i, &v) in inside.iter().enumerate() {
            label[v] = i;
        }
        let mut next = inside.len();
        let mut subtree_label: Vec<(usize, usize)> = Vec::new(); // (neighbour supernode, label)
        for (i, j, _) in &tree {
            let nb = if *i == x {
                *j
            } else if *j == x {
                *i
            } else {
                continue;
            };
            for member in subtree_without(&tree, nb, x) {
                for v in nodes[member].vertices.iter() {
                    label[v] = next;
                }
            }
            subtree_label.push((nb, next));
            next += 1;
        }
        let contracted = work.contract(&label, next);
        let flow = max_flow(&contracted, label[s], label[t])?;
        let side = &flow.min_cut.shore;

        let stay: VertexSet = inside.iter().copied().filter(|&v| side.contains(label[v])).collect();
        let moved = nodes[x].vertices.difference(&stay);
        let (stay_terms, moved_terms): (Vec<usize>, Vec<usize>) = nodes[x]
            .terminals
            .iter()
            .partition(|&&z| stay.contains(z));
        nodes[x] = Supernode {
            vertices: stay,
            terminals: stay_terms,
        };
        let y = nodes.len();
        nodes.push(Supernode {
            vertices: moved,
            terminals: moved_terms,
        });
        for edge in tree.iter_mut() {
            let nb = if edge.0 == x {
                edge.1
            } else if edge.1 == x {
                edge.0
            } else {
                continue;
            };
            let (_, lab) = subtree_label
                .iter()
                .find(|(n, _)| *n == nb)
                .copied()
                .expect("every neighbour was labelled");
            if !side.contains(lab) {
                *edge = (y, nb, edge.2.clone());
            }
        }
        tree.push((x, y, flow.value));
    }

    let mut bag_of = vec![usize::MAX; g.n()];
    let owner: Vec<usize> = nodes.iter().map(|s| s.terminals[0]).collect();
    for (i, s) in nodes.iter().enumerate() {
        for v in s.vertices.iter() {
            bag_of[v] = owner[i];
        }
    }
    let mut result = GomoryHuTree {
        n: g.n(),
        terminals: z.to_vec(),
        bag_of,
        edges: Vec::new(),
    };
    let mut edges: Vec<TreeEdge<C>> = tree
        .into_iter()
        .map(|(i, j, value)| {
            let (a, b) = (owner[i].min(owner[j]), owner[i].max(owner[j]));
            TreeEdge {
                a,
                b,
                capacity: value.clone(),
                perturbed_capacity: value,
                shore: VertexSet::new(),
            }
        })
        .collect();
    edges.sort_by_key(|e| (e.a, e.b));
    result.edges = edges;
    for i in 0..result.edges.len() {
        let shore = result.fundamental_shore(i);
        result.edges[i].capacity = g.boundary_capacity(&shore);
        result.edges[i].shore = shore;
    }
    Ok(result)
}

/// Supernodes reachable from `start` without passing through `blocked`.
fn subtree_without<C>(tree: &[(usize, usize, C)], start: usize, blocked: usize) -> Vec<usize> {
    let mut out = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for (i, j, _) in tree {
            let w = if *i == u {
                *j
            } else if *j == u {
                *i
            } else {
                continue;
            };
            if w != blocked && !out.contains(&w) {
                out.push(w);
                queue.push_back(w);
            }
        }
    }
    out
}

impl<C: Capacity> GomoryHuTree<C> {
    /// Assembles a tree from parts, recomputing every certificate shore
    /// from the tree structure. Capacities are taken as given.
    pub fn from_parts(
        n: usize,
        terminals: Vec<usize>,
        bag_of: Vec<usize>,
        edges: Vec<(usize, usize, C)>,
    ) -> Result<Self> {
        let mut t = Self {
            n,
            terminals,
            bag_of,
            edges: edges
                .into_iter()
                .map(|(a, b, c)| TreeEdge {
                    a,
                    b,
                    capacity: c.clone(),
                    perturbed_capacity: c,
                    shore: VertexSet::new(),
                })
                .collect(),
        };
        t.validate()?;
        for i in 0..t.edges.len() {
            t.edges[i].shore = t.fundamental_shore(i);
        }
        Ok(t)
    }

    /// Checks that bags partition the vertices, each terminal sits in its
    /// own bag, and the edges form a spanning tree on the terminals.
    pub fn validate(&self) -> Result<()> {
        let zs: VertexSet = self.terminals.iter().copied().collect();
        if zs.len() != self.terminals.len() {
            return Err(Error::MalformedTree("repeated terminal".into()));
        }
        if self.bag_of.len() != self.n {
            return Err(Error::MalformedTree("bag map does not cover every vertex".into()));
        }
        for (v, &owner) in self.bag_of.iter().enumerate() {
            if !zs.contains(owner) {
                return Err(Error::MalformedTree(format!("vertex {v} assigned to non-terminal {owner}")));
            }
        }
        for &z in &self.terminals {
            if z >= self.n || self.bag_of[z] != z {
                return Err(Error::MalformedTree(format!("terminal {z} is not in its own bag")));
            }
        }
        if self.edges.len() + 1 != self.terminals.len() {
            return Err(Error::MalformedTree("wrong number of tree edges".into()));
        }
        for e in &self.edges {
            if !zs.contains(e.a) || !zs.contains(e.b) || e.a == e.b {
                return Err(Error::MalformedTree(format!("bad tree edge {}-{}", e.a, e.b)));
            }
        }
        let reach = self.reachable_from(self.terminals[0], None);
        if reach.len() != self.terminals.len() {
            return Err(Error::MalformedTree("tree is disconnected".into()));
        }
        Ok(())
    }

    fn reachable_from(&self, start: usize, skip_edge: Option<usize>) -> VertexSet {
        let mut seen = VertexSet::singleton(start);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for (i, e) in self.edges.iter().enumerate() {
                if Some(i) == skip_edge {
                    continue;
                }
                let w = if e.a == u {
                    e.b
                } else if e.b == u {
                    e.a
                } else {
                    continue;
                };
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Union of the bags on `edges[i].a`'s side of `T - edges[i]`.
    pub fn fundamental_shore(&self, i: usize) -> VertexSet {
        let side = self.reachable_from(self.edges[i].a, Some(i));
        (0..self.n).filter(|&v| side.contains(self.bag_of[v])).collect()
    }

    pub fn bag(&self, z: usize) -> VertexSet {
        (0..self.n).filter(|&v| self.bag_of[v] == z).collect()
    }

    pub fn tree_degree(&self, z: usize) -> usize {
        self.edges.iter().filter(|e| e.a == z || e.b == z).count()
    }

    /// Indices of tree edges incident to `z`.
    pub fn incident(&self, z: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.edges[i].a == z || self.edges[i].b == z)
            .collect()
    }

    pub fn is_path(&self) -> bool {
        self.terminals.iter().all(|&z| self.tree_degree(z) <= 2)
    }

    /// The centre when the tree is a star with at least three leaves.
    pub fn star_center(&self) -> Option<usize> {
        let k = self.terminals.len();
        if k < 4 {
            return None;
        }
        self.terminals
            .iter()
            .copied()
            .find(|&z| self.tree_degree(z) == k - 1)
    }

    /// Edge indices on the unique tree path from `s` to `u`.
    pub fn path_edges(&self, s: usize, u: usize) -> Option<Vec<usize>> {
        let mut pred: Vec<Option<(usize, usize)>> = vec![None; self.n];
        let mut seen = VertexSet::singleton(s);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for (i, e) in self.edges.iter().enumerate() {
                let w = if e.a == x {
                    e.b
                } else if e.b == x {
                    e.a
                } else {
                    continue;
                };
                if seen.insert(w) {
                    pred[w] = Some((x, i));
                    queue.push_back(w);
                }
            }
        }
        if !seen.contains(u) {
            return None;
        }
        let mut out = Vec::new();
        let mut x = u;
        while let Some((p, i)) = pred[x] {
            out.push(i);
            x = p;
        }
        out.reverse();
        Some(out)
    }

    /// `λ(s, u)` read off the tree: the smallest capacity on the tree path.
    pub fn tree_lambda(&self, s: usize, u: usize) -> Result<C> {
        for x in [s, u] {
            if !self.terminals.contains(&x) {
                return Err(Error::NotTerminal(x));
            }
        }
        if s == u {
            return Err(Error::SameEndpoints);
        }
        let path = self
            .path_edges(s, u)
            .ok_or_else(|| Error::MalformedTree("tree is disconnected".into()))?;
        Ok(path
            .into_iter()
            .map(|i| self.edges[i].capacity.clone())
            .min()
            .expect("distinct terminals are joined by at least one edge"))
    }
}

/// Free-function form of [`GomoryHuTree::tree_lambda`].
pub fn tree_lambda<C: Capacity>(t: &GomoryHuTree<C>, s: usize, u: usize) -> Result<C> {
    t.tree_lambda(s, u)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCheck<C> {
    pub a: usize,
    pub b: usize,
    pub stored: C,
    pub shore_capacity: C,
    pub max_flow: C,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodingReport<C> {
    pub edges: Vec<EdgeCheck<C>>,
}

impl<C> EncodingReport<C> {
    pub fn all_pass(&self) -> bool {
        self.edges.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| !self.edges[i].pass).collect()
    }
}

/// Re-derives every tree edge's fundamental cut and checks it is a
/// minimum `ab`-cut of the stored capacity.
pub fn verify_encoding<C: Capacity>(g: &Graph<C>, t: &GomoryHuTree<C>) -> Result<EncodingReport<C>> {
    if t.n != g.n() {
        return Err(Error::MalformedTree("tree and graph disagree on vertex count".into()));
    }
    t.validate()?;
    let mut edges = Vec::with_capacity(t.edges.len());
    for (i, e) in t.edges.iter().enumerate() {
        let shore = t.fundamental_shore(i);
        let shore_capacity = g.cut_capacity(&shore)?;
        let flow = max_flow(g, e.a, e.b)?.value;
        let pass = shore_capacity == e.capacity && flow == e.capacity;
        edges.push(EdgeCheck {
            a: e.a,
            b: e.b,
            stored: e.capacity.clone(),
            shore_capacity,
            max_flow: flow,
            pass,
        });
    }
    Ok(EncodingReport { edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{k23, k33, path, U1, U2, V1, V2, V3};
    use crate::perturb::{deperturb, grid_denominator};
    use crate::testing::*;

    #[test]
    fn k33_tree_is_a_five_star_of_threes() {
        let g = k33();
        let t = build_gh_tree(&g, &(0..6).collect::<Vec<_>>()).unwrap();
        assert!(t.star_center().is_some());
        let grid = grid_denominator(&g);
        for e in &t.edges {
            assert_eq!(e.capacity, q(3));
            assert_eq!(deperturb(&e.perturbed_capacity, &grid), q(3));
        }
        assert!(verify_encoding(&g, &t).unwrap().all_pass());
    }

    #[test]
    fn capacitated_tree_is_its_own_gh_tree() {
        let g = path(&[q(5), q(2), qq(7, 2)]);
        let t = build_gh_tree(&g, &[0, 1, 2, 3]).unwrap();
        let got: Vec<_> = t.edges.iter().map(|e| (e.a, e.b, e.capacity.clone())).collect();
        assert_eq!(got, vec![(0, 1, q(5)), (1, 2, q(2)), (2, 3, qq(7, 2))]);
    }

    #[test]
    fn path_tree_lambda() {
        let t = GomoryHuTree::from_parts(3, vec![0, 1, 2], vec![0, 1, 2], vec![(0, 1, q(5)), (1, 2, q(2))])
            .unwrap();
        assert_eq!(t.tree_lambda(0, 2).unwrap(), q(2));
        assert_eq!(t.tree_lambda(0, 1).unwrap(), q(5));
        assert_eq!(t.tree_lambda(1, 1).unwrap_err(), Error::SameEndpoints);
    }

    #[test]
    fn k23_tree_values() {
        let g = k23();
        let z = vec![U1, U2, V1, V2, V3];
        let t = build_gh_tree(&g, &z).unwrap();
        assert_eq!(t.tree_lambda(U1, U2).unwrap(), q(3));
        for &v in &[V1, V2, V3] {
            assert_eq!(t.tree_lambda(v, U1).unwrap(), q(2));
        }
        assert!(verify_encoding(&g, &t).unwrap().all_pass());
    }

    #[test]
    fn tampering_flags_exactly_the_edge() {
        let g = k23();
        let mut t = build_gh_tree(&g, &[U1, U2, V1, V2, V3]).unwrap();
        t.edges[1].capacity = t.edges[1].capacity.clone() + q(1);
        let report = verify_encoding(&g, &t).unwrap();
        assert_eq!(report.failures(), vec![1]);
    }

    #[test]
    fn star_through_v1_is_rejected() {
        // u1 - v1 - u2 with v2, v3 hanging off v1, claiming 3 on u1v1
        let g = k23();
        let t = GomoryHuTree::from_parts(
            5,
            vec![U1, U2, V1, V2, V3],
            vec![U1, U2, V1, V2, V3],
            vec![(U1, V1, q(3)), (U2, V1, q(3)), (V1, V2, q(2)), (V1, V3, q(2))],
        )
        .unwrap();
        let report = verify_encoding(&g, &t).unwrap();
        let first = &report.edges[0];
        assert!(!first.pass);
        assert_eq!(first.shore_capacity, q(3));
        assert_eq!(first.max_flow, q(2));
    }

    #[test]
    fn terminal_bags_partition_vertices() {
        let g = k23();
        let t = build_gh_tree(&g, &[U1, U2]).unwrap();
        assert_eq!(t.edges.len(), 1);
        assert_eq!(t.edges[0].capacity, q(3));
        let total = t.bag(U1).union(&t.bag(U2));
        assert_eq!(total, VertexSet::full(5));
        assert!(t.bag(U1).is_disjoint(&t.bag(U2)));
    }

    #[test]
    fn malformed_inputs() {
        let g = k23();
        assert!(build_gh_tree(&g, &[U1]).is_err());
        let disconnected = CapGraph::new(3, vec![(0, 1, q(1))], vec![]).unwrap();
        assert_eq!(build_gh_tree(&disconnected, &[0, 2]).unwrap_err(), Error::Disconnected);
        let bad = GomoryHuTree::from_parts(3, vec![0, 1], vec![0, 1, 2], vec![(0, 1, q(1))]);
        assert!(matches!(bad, Err(Error::MalformedTree(_))));
    }
}
