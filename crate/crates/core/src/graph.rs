//! Undirected capacitated graphs with a terminal set.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::scalar::Capacity;
use crate::vset::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge<C> {
    pub id: usize,
    pub u: usize,
    pub v: usize,
    pub capacity: C,
}

impl<C> Edge<C> {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn joins(&self, a: usize, b: usize) -> bool {
        (self.u == a && self.v == b) || (self.u == b && self.v == a)
    }
}

/// A cut `δ(shore)` together with its capacity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut<C> {
    pub shore: VertexSet,
    pub capacity: C,
}

/// An undirected simple graph on vertices `0..n` with positive capacities
/// and an ordered terminal list.
///
/// Immutable once built; every transformation returns a new graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph<C> {
    n: usize,
    edges: Vec<Edge<C>>,
    adj: Vec<Vec<(usize, usize)>>,
    terminals: Vec<usize>,
}

/// A 2-connected block (or a bridge) of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub vertices: VertexSet,
    pub edges: Vec<usize>,
}

impl<C: Capacity> Graph<C> {
    /// Builds a graph, merging parallel edges by summing their capacities.
    /// Edge ids follow the order of first appearance.
    pub fn new<I>(n: usize, edges: I, terminals: Vec<usize>) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, C)>,
    {
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut merged: Vec<(usize, usize, C)> = Vec::new();
        for (u, v, c) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange(u));
            }
            if v >= n {
                return Err(Error::VertexOutOfRange(v));
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if c <= C::zero() {
                return Err(Error::NonPositiveCapacity { u, v });
            }
            let key = (u.min(v), u.max(v));
            match index.get(&key) {
                Some(&i) => {
                    let prev = merged[i].2.clone();
                    merged[i].2 = prev + c;
                }
                None => {
                    index.insert(key, merged.len());
                    merged.push((u, v, c));
                }
            }
        }
        let mut seen = VertexSet::new();
        for &z in &terminals {
            if z >= n {
                return Err(Error::VertexOutOfRange(z));
            }
            if !seen.insert(z) {
                return Err(Error::DuplicateTerminal(z));
            }
        }
        Ok(Self::assemble(n, merged, terminals))
    }

    pub(crate) fn assemble(n: usize, edges: Vec<(usize, usize, C)>, terminals: Vec<usize>) -> Self {
        let mut adj = vec![Vec::new(); n];
        let edges: Vec<Edge<C>> = edges
            .into_iter()
            .enumerate()
            .map(|(id, (u, v, capacity))| {
                adj[u].push((v, id));
                adj[v].push((u, id));
                Edge { id, u, v, capacity }
            })
            .collect();
        Self {
            n,
            edges,
            adj,
            terminals,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge<C>] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge<C> {
        &self.edges[id]
    }

    /// `(neighbour, edge id)` pairs.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn terminal_set(&self) -> VertexSet {
        self.terminals.iter().copied().collect()
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        self.terminals.contains(&v)
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn find_edge(&self, a: usize, b: usize) -> Option<usize> {
        self.adj[a].iter().find(|&&(w, _)| w == b).map(|&(_, id)| id)
    }

    pub fn with_terminals(&self, terminals: Vec<usize>) -> Result<Self> {
        let mut seen = VertexSet::new();
        for &z in &terminals {
            if z >= self.n {
                return Err(Error::VertexOutOfRange(z));
            }
            if !seen.insert(z) {
                return Err(Error::DuplicateTerminal(z));
            }
        }
        Ok(Self {
            terminals,
            ..self.clone()
        })
    }

    /// Same graph, capacities replaced edge by edge. `f` must keep them positive.
    pub fn map_capacities<D: Capacity>(&self, mut f: impl FnMut(&Edge<C>) -> D) -> Graph<D> {
        let edges = self.edges.iter().map(|e| (e.u, e.v, f(e))).collect();
        Graph::assemble(self.n, edges, self.terminals.clone())
    }

    /// Keeps only the edges for which `keep` holds; vertices are unchanged.
    /// Edge ids are renumbered densely.
    pub fn filter_edges(&self, mut keep: impl FnMut(&Edge<C>) -> bool) -> Self {
        let edges = self
            .edges
            .iter()
            .filter(|e| keep(e))
            .map(|e| (e.u, e.v, e.capacity.clone()))
            .collect();
        Self::assemble(self.n, edges, self.terminals.clone())
    }

    pub fn total_capacity(&self) -> C {
        self.edges
            .iter()
            .fold(C::zero(), |acc, e| acc + e.capacity.clone())
    }

    fn check_vertices(&self, s: &VertexSet) -> Result<()> {
        match s.iter().find(|&v| v >= self.n) {
            Some(v) => Err(Error::VertexOutOfRange(v)),
            None => Ok(()),
        }
    }

    /// `c(δ(s))`.
    pub fn cut_capacity(&self, s: &VertexSet) -> Result<C> {
        self.check_vertices(s)?;
        if s.is_empty() || s.len() == self.n {
            return Err(Error::ImproperShore);
        }
        Ok(self.boundary_capacity(s))
    }

    /// `c(δ(s))` without shore validation; zero for the empty or full set.
    pub fn boundary_capacity(&self, s: &VertexSet) -> C {
        self.edges
            .iter()
            .filter(|e| s.contains(e.u) != s.contains(e.v))
            .fold(C::zero(), |acc, e| acc + e.capacity.clone())
    }

    /// `d(x, y)`: capacity of the edges with one end in `x` and the other in `y`.
    pub fn cross_capacity(&self, x: &VertexSet, y: &VertexSet) -> Result<C> {
        self.check_vertices(x)?;
        self.check_vertices(y)?;
        if !x.is_disjoint(y) {
            return Err(Error::Overlap);
        }
        Ok(self
            .edges
            .iter()
            .filter(|e| {
                (x.contains(e.u) && y.contains(e.v)) || (x.contains(e.v) && y.contains(e.u))
            })
            .fold(C::zero(), |acc, e| acc + e.capacity.clone()))
    }

    pub fn cut(&self, s: VertexSet) -> Result<Cut<C>> {
        let capacity = self.cut_capacity(&s)?;
        Ok(Cut { shore: s, capacity })
    }

    /// A cut is central (a bond) when both shores induce connected subgraphs.
    pub fn is_central(&self, s: &VertexSet) -> Result<bool> {
        self.check_vertices(s)?;
        if s.is_empty() || s.len() == self.n {
            return Err(Error::ImproperShore);
        }
        Ok(self.induces_connected(s) && self.induces_connected(&s.complement(self.n)))
    }
}

// Structural queries that do not touch capacities.
impl<C> Graph<C> {
    fn bfs_within(&self, start: usize, allowed: &VertexSet) -> VertexSet {
        let mut seen = VertexSet::singleton(start);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &self.adj[v] {
                if allowed.contains(w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// The component of `start` in the subgraph induced by `allowed`.
    pub fn component_within(&self, start: usize, allowed: &VertexSet) -> VertexSet {
        self.bfs_within(start, allowed)
    }

    /// Whether `G[s]` is connected. The empty set counts as connected.
    pub fn induces_connected(&self, s: &VertexSet) -> bool {
        match s.first() {
            None => true,
            Some(v) => self.bfs_within(v, s).len() == s.len(),
        }
    }

    pub fn is_connected(&self) -> bool {
        self.adj.len() <= 1 || self.induces_connected(&VertexSet::full(self.adj.len()))
    }

    pub fn ensure_connected(&self) -> std::result::Result<(), Error> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Components of `G[allowed]`, each listed once, ordered by smallest vertex.
    pub fn components_within(&self, allowed: &VertexSet) -> Vec<VertexSet> {
        let mut left = allowed.clone();
        let mut out = Vec::new();
        while let Some(v) = left.first() {
            let comp = self.bfs_within(v, allowed);
            left = left.difference(&comp);
            out.push(comp);
        }
        out
    }

    /// Neighbourhood bitmasks; only valid for `n <= 64`.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.adj.len() <= 64, "mask helpers need at most 64 vertices");
        self.adj
            .iter()
            .map(|nbrs| nbrs.iter().fold(0u64, |m, &(w, _)| m | (1 << w)))
            .collect()
    }

    /// Blocks (maximal 2-connected subgraphs and bridges) via Tarjan's
    /// lowpoint algorithm. Isolated vertices belong to no block.
    pub fn blocks(&self) -> Vec<Block> {
        let n = self.adj.len();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0;
        let mut edge_stack: Vec<usize> = Vec::new();
        let mut blocks = Vec::new();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            // (vertex, parent edge, next neighbour index)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            while let Some(&mut (v, parent_edge, ref mut next)) = stack.last_mut() {
                if *next < self.adj[v].len() {
                    let (w, id) = self.adj[v][*next];
                    *next += 1;
                    if id == parent_edge {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        edge_stack.push(id);
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, id, 0));
                    } else if disc[w] < disc[v] {
                        edge_stack.push(id);
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[v]);
                        if low[v] >= disc[p] {
                            let mut edges = Vec::new();
                            while let Some(id) = edge_stack.pop() {
                                edges.push(id);
                                if id == parent_edge {
                                    break;
                                }
                            }
                            edges.sort_unstable();
                            blocks.push(self.block_from_edges(edges));
                        }
                    }
                }
            }
        }
        blocks
    }

    fn block_from_edges(&self, edges: Vec<usize>) -> Block {
        let mut vertices = VertexSet::new();
        for &id in &edges {
            let (u, v) = self.endpoints(id);
            vertices.insert(u);
            vertices.insert(v);
        }
        Block { vertices, edges }
    }

    pub fn endpoints(&self, id: usize) -> (usize, usize) {
        let e = &self.edges[id];
        (e.u.min(e.v), e.u.max(e.v))
    }

    pub fn cut_vertices(&self) -> VertexSet {
        let mut count = vec![0usize; self.adj.len()];
        for b in self.blocks() {
            for v in b.vertices.iter() {
                count[v] += 1;
            }
        }
        count
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 1)
            .map(|(v, _)| v)
            .collect()
    }

    /// Connected, at least three vertices and no cut vertex.
    pub fn is_biconnected(&self) -> bool {
        self.adj.len() >= 3 && self.is_connected() && self.blocks().len() == 1
    }
}

impl<C: Capacity> Graph<C> {
    /// Induced subgraph on `keep`, renumbered in increasing order.
    /// Returns the graph and the old id of every new vertex.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> (Self, Vec<usize>) {
        let old: Vec<usize> = keep.iter().filter(|&v| v < self.n).collect();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in old.iter().enumerate() {
            new_id[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| keep.contains(e.u) && keep.contains(e.v))
            .map(|e| (new_id[e.u], new_id[e.v], e.capacity.clone()))
            .collect();
        let terminals = self
            .terminals
            .iter()
            .filter(|&&z| keep.contains(z))
            .map(|&z| new_id[z])
            .collect();
        (Self::assemble(old.len(), edges, terminals), old)
    }

    /// Identifies vertices with equal `label`; labels must be `0..k`.
    /// Loops vanish and parallel edges merge. A label is a terminal when
    /// any of its vertices is one (first occurrence order).
    pub fn contract(&self, label: &[usize], k: usize) -> Self {
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut merged: Vec<(usize, usize, C)> = Vec::new();
        for e in &self.edges {
            let (a, b) = (label[e.u], label[e.v]);
            if a == b {
                continue;
            }
            let key = (a.min(b), a.max(b));
            match index.get(&key) {
                Some(&i) => {
                    let prev = merged[i].2.clone();
                    merged[i].2 = prev + e.capacity.clone();
                }
                None => {
                    index.insert(key, merged.len());
                    merged.push((a, b, e.capacity.clone()));
                }
            }
        }
        let mut seen = VertexSet::new();
        let terminals = self
            .terminals
            .iter()
            .map(|&z| label[z])
            .filter(|&l| seen.insert(l))
            .collect();
        Self::assemble(k, merged, terminals)
    }

    /// The graph obtained by contracting every edge outside `block`.
    ///
    /// Each vertex of the block absorbs the part of the graph hanging off
    /// it and becomes a terminal when that part holds one. Returns the
    /// block graph (renumbered) and the original id of each of its vertices.
    pub fn block_contraction(&self, block: &Block) -> (Self, Vec<usize>) {
        let block_edges: VertexSet = block.edges.iter().copied().collect();
        let old: Vec<usize> = block.vertices.to_vec();
        let mut terminals = Vec::new();
        let outside = self.filter_edges(|e| !block_edges.contains(e.id));
        let mut absorbed_terminal = vec![false; old.len()];
        for (i, &b) in old.iter().enumerate() {
            let comp = outside.component_within(b, &VertexSet::full(self.n));
            absorbed_terminal[i] = comp.iter().any(|v| self.is_terminal(v));
        }
        // keep the global terminal order where possible
        for &z in &self.terminals {
            if let Some(i) = old.iter().position(|&b| b == z) {
                terminals.push(i);
            }
        }
        for (i, &t) in absorbed_terminal.iter().enumerate() {
            if t && !terminals.contains(&i) {
                terminals.push(i);
            }
        }
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in old.iter().enumerate() {
            new_id[v] = i;
        }
        let edges = block
            .edges
            .iter()
            .map(|&id| {
                let e = &self.edges[id];
                (new_id[e.u], new_id[e.v], e.capacity.clone())
            })
            .collect();
        (Self::assemble(old.len(), edges, terminals), old)
    }
}
