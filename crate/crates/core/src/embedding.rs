//! How a Gomory-Hu terminal tree sits inside its graph: as a subgraph,
//! as a bag minor, or as a bag minor after deleting non-terminals.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::gomory_hu::{build_gh_tree, GomoryHuTree};
use crate::graph::Graph;
use crate::scalar::Capacity;
use crate::vset::VertexSet;

/// Largest number of non-terminals the exhaustive weak check will try.
pub const DEFAULT_WEAK_BOUND: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Subgraph,
    BagMinor,
    WeakBagMinor,
    None,
}

/// One edge id of `G` per tree edge, in tree edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgraphWitness {
    pub edge_map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BagMinorWitness {
    /// Per tree edge, a `G` edge between the two bags.
    pub connecting: Vec<usize>,
    /// Per terminal (in tree terminal order), edges of a spanning tree of
    /// its bag.
    pub spanning: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakWitness {
    pub deleted: VertexSet,
    pub bag_minor: BagMinorWitness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Subgraph(SubgraphWitness),
    BagMinor(BagMinorWitness),
    Weak(WeakWitness),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingVerdict {
    pub mode: Mode,
    pub witness: Option<Witness>,
}

fn check_shapes<C: Capacity>(g: &Graph<C>, t: &GomoryHuTree<C>) -> Result<()> {
    if t.n != g.n() {
        return Err(Error::MalformedTree("tree and graph disagree on vertex count".into()));
    }
    t.validate()
}

/// Whether every tree edge is an edge of `g`. Needs `Z = V`.
pub fn is_gh_subgraph<C: Capacity>(g: &Graph<C>, t: &GomoryHuTree<C>) -> Result<Option<SubgraphWitness>> {
    check_shapes(g, t)?;
    if t.terminals.len() != g.n() {
        return Err(Error::Invalid("subgraph check needs every vertex to be a terminal".into()));
    }
    let edge_map: Option<Vec<usize>> = t.edges.iter().map(|e| g.find_edge(e.a, e.b)).collect();
    Ok(edge_map.map(|edge_map| SubgraphWitness { edge_map }))
}

fn spanning_tree_edges<C: Capacity>(g: &Graph<C>, root: usize, within: &VertexSet) -> Option<Vec<usize>> {
    let mut seen = VertexSet::singleton(root);
    let mut queue = VecDeque::from([root]);
    let mut used = Vec::new();
    while let Some(v) = queue.pop_front() {
        for &(w, id) in g.neighbors(v) {
            if within.contains(w) && seen.insert(w) {
                used.push(id);
                queue.push_back(w);
            }
        }
    }
    (seen.len() == within.len()).then_some(used)
}

/// The bag-minor conditions with bags restricted to `alive`.
fn bag_minor_within<C: Capacity>(
    g: &Graph<C>,
    t: &GomoryHuTree<C>,
    alive: &VertexSet,
) -> Option<BagMinorWitness> {
    let bags: Vec<VertexSet> = t
        .terminals
        .iter()
        .map(|&z| t.bag(z).intersection(alive))
        .collect();
    let index_of = |z: usize| t.terminals.iter().position(|&x| x == z).expect("tree endpoint is a terminal");
    let mut spanning = Vec::with_capacity(bags.len());
    for (i, &z) in t.terminals.iter().enumerate() {
        if !bags[i].contains(z) {
            return None;
        }
        spanning.push(spanning_tree_edges(g, z, &bags[i])?);
    }
    let mut connecting = Vec::with_capacity(t.edges.len());
    for e in &t.edges {
        let (ba, bb) = (&bags[index_of(e.a)], &bags[index_of(e.b)]);
        let hit = g
            .edges()
            .iter()
            .find(|x| (ba.contains(x.u) && bb.contains(x.v)) || (ba.contains(x.v) && bb.contains(x.u)))?;
        connecting.push(hit.id);
    }
    Some(BagMinorWitness { connecting, spanning })
}

/// Every bag induces a connected subgraph and every tree edge is matched
/// by a `G` edge between the two bags.
pub fn check_bag_minor<C: Capacity>(g: &Graph<C>, t: &GomoryHuTree<C>) -> Result<Option<BagMinorWitness>> {
    check_shapes(g, t)?;
    Ok(bag_minor_within(g, t, &VertexSet::full(g.n())))
}

/// Bag minor after deleting some non-terminal vertices.
///
/// First deletes, in every bag, whatever is not in the terminal's
/// component. If that does not work, tries every subset of non-terminals
/// (at most `bound` of them, else an inconclusive error).
pub fn check_weak_bag_minor<C: Capacity>(
    g: &Graph<C>,
    t: &GomoryHuTree<C>,
    bound: usize,
) -> Result<Option<WeakWitness>> {
    check_shapes(g, t)?;
    let mut alive = VertexSet::new();
    for &z in &t.terminals {
        alive = alive.union(&g.component_within(z, &t.bag(z)));
    }
    if let Some(w) = bag_minor_within(g, t, &alive) {
        return Ok(Some(WeakWitness {
            deleted: alive.complement(g.n()),
            bag_minor: w,
        }));
    }
    let zs: VertexSet = t.terminals.iter().copied().collect();
    let free: Vec<usize> = (0..g.n()).filter(|&v| !zs.contains(v)).collect();
    if free.len() > bound.min(63) {
        return Err(Error::BoundExceeded {
            what: "weak bag minor deletion search",
            size: free.len(),
            bound,
        });
    }
    for bits in 0u64..(1u64 << free.len()) {
        let deleted: VertexSet = free
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        let alive = deleted.complement(g.n());
        if let Some(w) = bag_minor_within(g, t, &alive) {
            return Ok(Some(WeakWitness { deleted, bag_minor: w }));
        }
    }
    Ok(None)
}

impl SubgraphWitness {
    pub fn recheck<C: Capacity>(&self, g: &Graph<C>, t: &GomoryHuTree<C>) -> bool {
        self.edge_map.len() == t.edges.len()
            && t
                .edges
                .iter()
                .zip(&self.edge_map)
                .all(|(e, &id)| id < g.m() && g.edge(id).joins(e.a, e.b))
    }
}

impl BagMinorWitness {
    /// Re-checks against `g` and `t` with `deleted` removed from every bag.
    pub fn recheck<C: Capacity>(&self, g: &Graph<C>, t: &GomoryHuTree<C>, deleted: &VertexSet) -> bool {
        if self.connecting.len() != t.edges.len() || self.spanning.len() != t.terminals.len() {
            return false;
        }
        let alive = deleted.complement(g.n());
        let bag = |z: usize| t.bag(z).intersection(&alive);
        for (i, &z) in t.terminals.iter().enumerate() {
            let b = bag(z);
            let ids = &self.spanning[i];
            if !b.contains(z) || ids.len() + 1 != b.len() {
                return false;
            }
            // a forest with |B| - 1 edges inside B that reaches all of B
            let mut reach = VertexSet::singleton(z);
            let mut grew = true;
            while grew {
                grew = false;
                for &id in ids {
                    if id >= g.m() {
                        return false;
                    }
                    let e = g.edge(id);
                    if !b.contains(e.u) || !b.contains(e.v) {
                        return false;
                    }
                    if reach.contains(e.u) != reach.contains(e.v) {
                        reach.insert(e.u);
                        reach.insert(e.v);
                        grew = true;
                    }
                }
            }
            if reach != b {
                return false;
            }
        }
        t.edges.iter().zip(&self.connecting).all(|(te, &id)| {
            if id >= g.m() {
                return false;
            }
            let e = g.edge(id);
            let (ba, bb) = (bag(te.a), bag(te.b));
            (ba.contains(e.u) && bb.contains(e.v)) || (ba.contains(e.v) && bb.contains(e.u))
        })
    }
}

impl WeakWitness {
    pub fn recheck<C: Capacity>(&self, g: &Graph<C>, t: &GomoryHuTree<C>) -> bool {
        t.terminals.iter().all(|&z| !self.deleted.contains(z)) && self.bag_minor.recheck(g, t, &self.deleted)
    }
}

/// The strongest of the three embedding modes that holds. The subgraph
/// mode is only tried when every vertex is a terminal.
pub fn classify_embedding<C: Capacity>(
    g: &Graph<C>,
    t: &GomoryHuTree<C>,
    weak_bound: usize,
) -> Result<EmbeddingVerdict> {
    if t.terminals.len() == g.n() {
        if let Some(w) = is_gh_subgraph(g, t)? {
            return Ok(EmbeddingVerdict {
                mode: Mode::Subgraph,
                witness: Some(Witness::Subgraph(w)),
            });
        }
    }
    if let Some(w) = check_bag_minor(g, t)? {
        return Ok(EmbeddingVerdict {
            mode: Mode::BagMinor,
            witness: Some(Witness::BagMinor(w)),
        });
    }
    Ok(match check_weak_bag_minor(g, t, weak_bound)? {
        Some(w) => EmbeddingVerdict {
            mode: Mode::WeakBagMinor,
            witness: Some(Witness::Weak(w)),
        },
        None => EmbeddingVerdict {
            mode: Mode::None,
            witness: None,
        },
    })
}

/// Removes terminal `v` from the tree, folding its bag into the neighbour
/// across its heaviest incident edge and reattaching its other neighbours
/// there. Comparisons use the perturbed capacities.
pub fn merge_terminal<C: Capacity>(t: &GomoryHuTree<C>, v: usize) -> Result<GomoryHuTree<C>> {
    t.validate()?;
    if !t.terminals.contains(&v) {
        return Err(Error::NotTerminal(v));
    }
    if t.terminals.len() < 3 {
        return Err(Error::Invalid("merging needs at least three terminals".into()));
    }
    let incident = t.incident(v);
    let heaviest = incident
        .iter()
        .map(|&i| &t.edges[i].perturbed_capacity)
        .max()
        .expect("a tree vertex has an incident edge");
    let top: Vec<usize> = incident
        .iter()
        .copied()
        .filter(|&i| &t.edges[i].perturbed_capacity == heaviest)
        .collect();
    if top.len() > 1 {
        return Err(Error::Tie(v));
    }
    let keep = top[0];
    let u = if t.edges[keep].a == v { t.edges[keep].b } else { t.edges[keep].a };
    let mut edges = Vec::with_capacity(t.edges.len() - 1);
    for (i, e) in t.edges.iter().enumerate() {
        if i == keep {
            continue;
        }
        let mut e = e.clone();
        if e.a == v {
            e.a = u;
        }
        if e.b == v {
            e.b = u;
        }
        if e.a > e.b {
            std::mem::swap(&mut e.a, &mut e.b);
        }
        edges.push(e);
    }
    let mut out = GomoryHuTree {
        n: t.n,
        terminals: t.terminals.iter().copied().filter(|&z| z != v).collect(),
        bag_of: t.bag_of.iter().map(|&z| if z == v { u } else { z }).collect(),
        edges,
    };
    out.validate()?;
    for i in 0..out.edges.len() {
        out.edges[i].shore = out.fundamental_shore(i);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeShape {
    Path,
    Star,
}

#[derive(Clone, Debug)]
pub struct FourTerminalVerdict<C> {
    pub shape: TreeShape,
    pub tree: GomoryHuTree<C>,
    /// Bag minor for paths, weak bag minor for stars.
    pub holds: bool,
    pub deleted: Option<VertexSet>,
}

/// Builds the terminal tree for at most four terminals and checks the
/// embedding its shape calls for.
pub fn four_terminal_structure<C: Capacity>(
    g: &Graph<C>,
    z: &[usize],
    weak_bound: usize,
) -> Result<FourTerminalVerdict<C>> {
    if z.len() > 4 {
        return Err(Error::Invalid("at most four terminals".into()));
    }
    let tree = build_gh_tree(g, z)?;
    if tree.is_path() {
        let w = check_bag_minor(g, &tree)?;
        Ok(FourTerminalVerdict {
            shape: TreeShape::Path,
            holds: w.is_some(),
            deleted: w.map(|_| VertexSet::new()),
            tree,
        })
    } else {
        let w = check_weak_bag_minor(g, &tree, weak_bound)?;
        Ok(FourTerminalVerdict {
            shape: TreeShape::Star,
            holds: w.is_some(),
            deleted: w.map(|w| w.deleted),
            tree,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{k23, path, U1, U2, V1, V2, V3};
    use crate::gomory_hu::verify_encoding;
    use crate::testing::*;

    #[test]
    fn k23_tree_is_not_a_subgraph() {
        let g = k23();
        let t = build_gh_tree(&g, &[U1, U2, V1, V2, V3]).unwrap();
        assert_eq!(is_gh_subgraph(&g, &t).unwrap(), None);
    }

    #[test]
    fn a_tree_graph_is_its_own_subgraph_tree() {
        let g = path(&[q(2), q(1), q(3)]);
        let t = build_gh_tree(&g, &[0, 1, 2, 3]).unwrap();
        let w = is_gh_subgraph(&g, &t).unwrap().unwrap();
        assert!(w.recheck(&g, &t));
        let b = check_bag_minor(&g, &t).unwrap().unwrap();
        assert!(b.recheck(&g, &t, &VertexSet::new()));
    }

    #[test]
    fn subgraph_check_needs_all_vertices() {
        let g = k23();
        let t = build_gh_tree(&g, &[U1, U2]).unwrap();
        assert!(is_gh_subgraph(&g, &t).is_err());
    }

    #[test]
    fn four_terminal_k23_needs_a_deletion() {
        // Z = {v1, v2, v3, u1}: the bag of u1 also holds u2
        let g = k23();
        let z = [V1, V2, V3, U1];
        let t = build_gh_tree(&g, &z).unwrap();
        assert_eq!(t.bag(U1), vs(&[U1, U2]));
        assert_eq!(check_bag_minor(&g, &t).unwrap(), None);
        let w = check_weak_bag_minor(&g, &t, DEFAULT_WEAK_BOUND).unwrap().unwrap();
        assert_eq!(w.deleted, vs(&[U2]));
        assert!(w.recheck(&g, &t));
        let four = four_terminal_structure(&g, &z, DEFAULT_WEAK_BOUND).unwrap();
        assert_eq!(four.shape, TreeShape::Star);
        assert!(four.holds);
    }

    #[test]
    fn bag_minor_implies_weak_with_nothing_deleted() {
        let g = cycle(6);
        let t = build_gh_tree(&g, &[0, 2, 4]).unwrap();
        assert!(check_bag_minor(&g, &t).unwrap().is_some());
        let w = check_weak_bag_minor(&g, &t, DEFAULT_WEAK_BOUND).unwrap().unwrap();
        assert!(w.deleted.is_empty());
        let four = four_terminal_structure(&g, &[0, 2, 4], DEFAULT_WEAK_BOUND).unwrap();
        assert_eq!(four.shape, TreeShape::Path);
        assert!(four.holds);
    }

    #[test]
    fn merging_a_path_end() {
        let g = path(&[q(5), q(2)]);
        let t = build_gh_tree(&g, &[0, 1, 2]).unwrap();
        let m = merge_terminal(&t, 2).unwrap();
        assert_eq!(m.terminals, vec![0, 1]);
        assert_eq!(m.edges.len(), 1);
        assert_eq!((m.edges[0].a, m.edges[0].b), (0, 1));
        assert!(m.bag(1).contains(2));
        assert!(verify_encoding(&g, &m).unwrap().all_pass());
    }

    #[test]
    fn merging_reports_ties() {
        let t = GomoryHuTree::from_parts(3, vec![0, 1, 2], vec![0, 1, 2], vec![(0, 1, q(2)), (1, 2, q(2))])
            .unwrap();
        assert_eq!(merge_terminal(&t, 1).unwrap_err(), Error::Tie(1));
        assert!(merge_terminal(&t, 0).is_ok());
    }

    #[test]
    fn witness_recheck_catches_tampering() {
        let g = cycle(5);
        let t = build_gh_tree(&g, &[0, 2]).unwrap();
        let mut w = check_bag_minor(&g, &t).unwrap().unwrap();
        assert!(w.recheck(&g, &t, &VertexSet::new()));
        w.connecting[0] = g.find_edge(3, 4).unwrap();
        // 3 and 4 may share a bag; either way the witness no longer joins 0's and 2's bags
        let (b0, b2) = (t.bag(0), t.bag(2));
        let e = g.edge(w.connecting[0]);
        let joins = (b0.contains(e.u) && b2.contains(e.v)) || (b0.contains(e.v) && b2.contains(e.u));
        assert_eq!(w.recheck(&g, &t, &VertexSet::new()), joins);
    }
}
