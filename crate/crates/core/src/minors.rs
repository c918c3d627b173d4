//! Terminal minors of small fixed patterns and crossing 2-linkages.
//!
//! The search fixes which terminal seeds each pattern vertex first, then
//! realises the pattern edges one at a time. An edge whose branch sets
//! are not yet adjacent is realised by a path through unused vertices,
//! split into a prefix joining one branch set and a suffix joining the
//! other. Any valid embedding can be shrunk to one built this way, so the
//! search is exhaustive; it only ever extends along induced paths that
//! touch the two branch sets at their ends, which keeps it small.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Capacity;
use crate::vset::VertexSet;

/// Default vertex bound for minor and linkage searches.
pub const DEFAULT_MINOR_BOUND: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorPattern {
    pub name: String,
    /// Whether each pattern vertex must be seeded by a terminal.
    pub terminal: Vec<bool>,
    pub edges: Vec<(usize, usize)>,
}

impl MinorPattern {
    pub fn new(name: impl Into<String>, terminal: Vec<bool>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = terminal.len();
        let mut seen = HashSet::new();
        for &(a, b) in &edges {
            if a >= n || b >= n || a == b || !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::Invalid(format!("bad pattern edge {a}-{b}")));
            }
        }
        Ok(Self {
            name: name.into(),
            terminal,
            edges,
        })
    }

    pub fn len(&self) -> usize {
        self.terminal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terminal.is_empty()
    }

    /// `K₂,₃`: vertices 0 and 1 form the side of degree three.
    pub fn k23() -> Self {
        let edges = [0, 1].iter().flat_map(|&a| (2..5).map(move |b| (a, b))).collect();
        Self::new("k23", vec![true; 5], edges).expect("valid pattern")
    }

    pub fn k4() -> Self {
        let edges = (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).collect();
        Self::new("k4", vec![true; 4], edges).expect("valid pattern")
    }

    /// `K₄` with edge 0-1 subdivided by vertex 4.
    pub fn k4_plus() -> Self {
        let edges = vec![(0, 4), (4, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        Self::new("k4plus", vec![true; 5], edges).expect("valid pattern")
    }

    pub fn cycle(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::Invalid("a cycle pattern needs at least three vertices".into()));
        }
        Self::new(format!("cycle:{k}"), vec![true; k], (0..k).map(|i| (i, (i + 1) % k)).collect())
    }

    fn adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in &self.edges {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        adj
    }

    /// All automorphisms (as vertex permutations) respecting terminal flags.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let adj = self.adjacency();
        let mut out = Vec::new();
        let mut perm = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn extend(
            p: &MinorPattern,
            adj: &[Vec<bool>],
            perm: &mut Vec<usize>,
            used: &mut [bool],
            out: &mut Vec<Vec<usize>>,
        ) {
            let i = perm.len();
            if i == p.len() {
                out.push(perm.clone());
                return;
            }
            for img in 0..p.len() {
                if used[img] || p.terminal[img] != p.terminal[i] {
                    continue;
                }
                if (0..i).any(|j| adj[i][j] != adj[img][perm[j]]) {
                    continue;
                }
                used[img] = true;
                perm.push(img);
                extend(p, adj, perm, used, out);
                perm.pop();
                used[img] = false;
            }
        }
        extend(self, &adj, &mut perm, &mut used, &mut out);
        out
    }
}

impl fmt::Display for MinorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl FromStr for MinorPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "k23" => Ok(Self::k23()),
            "k4" => Ok(Self::k4()),
            "k4plus" | "k4+" => Ok(Self::k4_plus()),
            other => match other.strip_prefix("cycle:") {
                Some(k) => {
                    let k = k
                        .parse()
                        .map_err(|_| Error::Invalid(format!("bad cycle length in '{s}'")))?;
                    Self::cycle(k)
                }
                None => Err(Error::Invalid(format!("unknown pattern '{s}'"))),
            },
        }
    }
}

/// Branch set of every pattern vertex, in pattern order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorEmbedding {
    pub branch_sets: Vec<VertexSet>,
}

fn check_bound<C: Capacity>(g: &Graph<C>, bound: usize, what: &'static str) -> Result<()> {
    let limit = bound.min(64);
    if g.n() > limit {
        return Err(Error::BoundExceeded {
            what,
            size: g.n(),
            bound: limit,
        });
    }
    Ok(())
}

fn neighbourhood(adj: &[u64], mut set: u64) -> u64 {
    let mut out = 0;
    while set != 0 {
        let v = set.trailing_zeros() as usize;
        out |= adj[v];
        set &= set - 1;
    }
    out
}

/// Vertices reachable from `start` inside `allowed` (start included if allowed).
fn reach(adj: &[u64], start: u64, allowed: u64) -> u64 {
    let mut seen = start & allowed;
    let mut frontier = seen;
    while frontier != 0 {
        let next = neighbourhood(adj, frontier) & allowed & !seen;
        seen |= next;
        frontier = next;
    }
    seen
}

struct Search<'a> {
    adj: &'a [u64],
    full: u64,
    edges: Vec<(usize, usize)>,
    branch: Vec<u64>,
    used: u64,
    dead: HashSet<(usize, Vec<u64>)>,
}

impl Search<'_> {
    fn adjacent(&self, p: usize, q: usize) -> bool {
        neighbourhood(self.adj, self.branch[p]) & self.branch[q] != 0
    }

    /// Every unrealised edge can still be routed through free vertices.
    fn plausible(&self, from: usize) -> bool {
        let free = self.full & !self.used;
        self.edges[from..].iter().all(|&(p, q)| {
            if self.adjacent(p, q) {
                return true;
            }
            let start = neighbourhood(self.adj, self.branch[p]) & free;
            reach(self.adj, start, free) & neighbourhood(self.adj, self.branch[q]) != 0
        })
    }

    /// Induced paths through free vertices that touch `B_p` only at the
    /// first vertex and `B_q` only at the last.
    fn paths(&self, p: usize, q: usize) -> Vec<Vec<usize>> {
        let free = self.full & !self.used;
        let np = neighbourhood(self.adj, self.branch[p]);
        let nq = neighbourhood(self.adj, self.branch[q]);
        let mut out = Vec::new();
        let mut path = Vec::new();
        let mut starts = np & free;
        while starts != 0 {
            let x = starts.trailing_zeros() as usize;
            starts &= starts - 1;
            path.push(x);
            self.grow(&mut path, 1 << x, free, np, nq, &mut out);
            path.pop();
        }
        out
    }

    fn grow(&self, path: &mut Vec<usize>, mask: u64, free: u64, np: u64, nq: u64, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().expect("non-empty path");
        if nq >> last & 1 == 1 {
            out.push(path.clone());
            return;
        }
        let prev = mask & !(1 << last);
        let mut cand = self.adj[last] & free & !mask & !np;
        while cand != 0 {
            let y = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if self.adj[y] & prev != 0 {
                continue;
            }
            path.push(y);
            self.grow(path, mask | 1 << y, free, np, nq, out);
            path.pop();
        }
    }

    fn run(&mut self, mut idx: usize) -> bool {
        while idx < self.edges.len() && self.adjacent(self.edges[idx].0, self.edges[idx].1) {
            idx += 1;
        }
        if idx == self.edges.len() {
            return true;
        }
        let key = (idx, self.branch.clone());
        if self.dead.contains(&key) {
            return false;
        }
        if self.plausible(idx) {
            let (p, q) = self.edges[idx];
            for path in self.paths(p, q) {
                let (bp, bq, used) = (self.branch[p], self.branch[q], self.used);
                for &v in &path {
                    self.used |= 1 << v;
                }
                for split in 0..=path.len() {
                    self.branch[p] = path[..split].iter().fold(bp, |m, &v| m | 1 << v);
                    self.branch[q] = path[split..].iter().fold(bq, |m, &v| m | 1 << v);
                    if self.run(idx + 1) {
                        return true;
                    }
                }
                self.branch[p] = bp;
                self.branch[q] = bq;
                self.used = used;
            }
        }
        self.dead.insert(key);
        false
    }
}

/// Pattern edges reordered so each one touches an earlier one when possible.
fn search_order(p: &MinorPattern) -> Vec<(usize, usize)> {
    let mut left = p.edges.clone();
    let mut out = Vec::with_capacity(left.len());
    let mut touched = vec![false; p.len()];
    while !left.is_empty() {
        let i = left
            .iter()
            .position(|&(a, b)| touched[a] || touched[b])
            .unwrap_or(0);
        let (a, b) = left.remove(i);
        touched[a] = true;
        touched[b] = true;
        out.push((a, b));
    }
    out
}

/// Seed assignments, one per orbit of the pattern's automorphism group.
fn canonical_seedings(p: &MinorPattern, z: &[usize], n: usize) -> Vec<Vec<usize>> {
    let autos = p.automorphisms();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p.len());
    fn assign(
        p: &MinorPattern,
        z: &[usize],
        n: usize,
        autos: &[Vec<usize>],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = cur.len();
        if i == p.len() {
            let canonical = autos
                .iter()
                .all(|s| cur.iter().copied().le(s.iter().map(|&j| cur[j])));
            if canonical {
                out.push(cur.clone());
            }
            return;
        }
        let candidates: Vec<usize> = if p.terminal[i] { z.to_vec() } else { (0..n).collect() };
        for v in candidates {
            if cur.contains(&v) {
                continue;
            }
            cur.push(v);
            assign(p, z, n, autos, cur, out);
            cur.pop();
        }
    }
    assign(p, z, n, &autos, &mut cur, &mut out);
    out
}

/// Searches for a terminal minor of pattern `p` whose terminal-flagged
/// branch sets are seeded by distinct vertices of `z`. Exhaustive for
/// `n <= bound`; larger graphs give an inconclusive error.
pub fn detect_terminal_minor<C: Capacity>(
    g: &Graph<C>,
    z: &[usize],
    p: &MinorPattern,
    bound: usize,
) -> Result<Option<MinorEmbedding>> {
    check_bound(g, bound, "terminal minor search")?;
    for &t in z {
        if t >= g.n() {
            return Err(Error::VertexOutOfRange(t));
        }
    }
    let needed = p.terminal.iter().filter(|&&t| t).count();
    if needed > z.len() || p.len() > g.n() {
        return Ok(None);
    }
    let adj = g.adjacency_masks();
    let full = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let edges = search_order(p);
    for seeds in canonical_seedings(p, z, g.n()) {
        let branch: Vec<u64> = seeds.iter().map(|&v| 1u64 << v).collect();
        let used = branch.iter().fold(0, |m, b| m | b);
        let mut s = Search {
            adj: &adj,
            full,
            edges: edges.clone(),
            branch,
            used,
            dead: HashSet::new(),
        };
        if s.run(0) {
            let emb = MinorEmbedding {
                branch_sets: s.branch.iter().map(|&b| VertexSet::from_mask(b)).collect(),
            };
            debug_assert!(verify_embedding(g, z, p, &emb));
            return Ok(Some(emb));
        }
    }
    Ok(None)
}

/// Checks disjointness, connectivity, terminal seeding and edge coverage.
pub fn verify_embedding<C: Capacity>(g: &Graph<C>, z: &[usize], p: &MinorPattern, emb: &MinorEmbedding) -> bool {
    let sets = &emb.branch_sets;
    if sets.len() != p.len() {
        return false;
    }
    let zs: VertexSet = z.iter().copied().collect();
    for (i, s) in sets.iter().enumerate() {
        if s.is_empty() || s.iter().any(|v| v >= g.n()) || !g.induces_connected(s) {
            return false;
        }
        if p.terminal[i] && s.is_disjoint(&zs) {
            return false;
        }
        if sets[..i].iter().any(|t| !t.is_disjoint(s)) {
            return false;
        }
    }
    p.edges.iter().all(|&(a, b)| {
        sets[a]
            .iter()
            .any(|v| g.neighbors(v).iter().any(|&(w, _)| sets[b].contains(w)))
    })
}

/// Whether there are vertex-disjoint paths `order[i]`-`order[i2]` and
/// `order[j]`-`order[j2]`, for `i < j < i2 < j2`.
pub fn crossing_linkage<C: Capacity>(
    g: &Graph<C>,
    order: &[usize],
    (i, j, i2, j2): (usize, usize, usize, usize),
    bound: usize,
) -> Result<bool> {
    check_bound(g, bound, "linkage search")?;
    if !(i < j && j < i2 && i2 < j2 && j2 < order.len()) {
        return Err(Error::Invalid("linkage indices must satisfy i < j < i2 < j2".into()));
    }
    let (a, b, c, d) = (order[i], order[i2], order[j], order[j2]);
    let distinct: VertexSet = [a, b, c, d].into_iter().collect();
    if distinct.len() != 4 || distinct.iter().any(|v| v >= g.n()) {
        return Err(Error::Invalid("linkage needs four distinct vertices".into()));
    }
    let adj = g.adjacency_masks();
    let full = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let allowed = full & !(1 << c) & !(1 << d);
    // induced a-b paths suffice: shortcutting a path only frees vertices
    fn walk(adj: &[u64], path_mask: u64, last: usize, b: usize, allowed: u64, full: u64, c: usize, d: usize) -> bool {
        if last == b {
            let rest = full & !path_mask;
            return reach(adj, 1 << c, rest) >> d & 1 == 1;
        }
        let earlier = path_mask & !(1 << last);
        let mut cand = adj[last] & allowed & !path_mask;
        while cand != 0 {
            let y = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if adj[y] & earlier != 0 {
                continue;
            }
            if walk(adj, path_mask | 1 << y, y, b, allowed, full, c, d) {
                return true;
            }
        }
        false
    }
    Ok(walk(&adj, 1 << a, a, b, allowed, full, c, d))
}

/// Every crossing quadruple of positions in `order`.
pub fn crossing_quadruples(k: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            for i2 in j + 1..k {
                for j2 in i2 + 1..k {
                    out.push((i, j, i2, j2));
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    /// Five or more terminals and a terminal `K₄` give a terminal `K₂,₃`.
    K4ImpliesK23,
    /// 2-connected, `K₂,₃`-free, five or more terminals: a cycle through all terminals.
    SpanningCycle,
    /// In that cycle's order no crossing linkage exists.
    NoCrossingLinkage,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImpliedCheck {
    /// Original vertex ids of the block.
    pub block: Vec<usize>,
    pub claim: Claim,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ImpliedReport {
    pub checks: Vec<ImpliedCheck>,
}

impl ImpliedReport {
    pub fn violations(&self) -> Vec<&ImpliedCheck> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }
}

/// Runs the structural implications on every block (after contracting
/// the rest of the graph into it). Blocks with fewer than five
/// terminals are skipped, since none of the claims apply there.
pub fn implied_minor_checks<C: Capacity>(
    g: &Graph<C>,
    z: &[usize],
    bound: usize,
) -> Result<ImpliedReport> {
    let g = g.with_terminals(z.to_vec())?;
    let mut report = ImpliedReport::default();
    for block in g.blocks() {
        if block.vertices.len() < 3 {
            continue;
        }
        let (h, old) = g.block_contraction(&block);
        let zb = h.terminals().to_vec();
        if zb.len() < 5 {
            continue;
        }
        let block_ids = old.clone();
        let k23 = detect_terminal_minor(&h, &zb, &MinorPattern::k23(), bound)?;
        if k23.is_some() {
            report.checks.push(ImpliedCheck {
                block: block_ids,
                claim: Claim::K4ImpliesK23,
                holds: true,
                detail: "terminal K23 present".into(),
            });
            continue;
        }
        let k4 = detect_terminal_minor(&h, &zb, &MinorPattern::k4(), bound)?;
        report.checks.push(ImpliedCheck {
            block: block_ids.clone(),
            claim: Claim::K4ImpliesK23,
            holds: k4.is_none(),
            detail: if k4.is_some() {
                "terminal K4 found without a terminal K23".into()
            } else {
                "no terminal K4".into()
            },
        });
        let cyc = detect_terminal_minor(&h, &zb, &MinorPattern::cycle(zb.len())?, bound)?;
        report.checks.push(ImpliedCheck {
            block: block_ids.clone(),
            claim: Claim::SpanningCycle,
            holds: cyc.is_some(),
            detail: match &cyc {
                Some(_) => format!("terminal cycle through all {} terminals", zb.len()),
                None => "no cycle through all terminals".into(),
            },
        });
        if let Some(emb) = cyc {
            let order: Vec<usize> = emb
                .branch_sets
                .iter()
                .map(|s| {
                    s.iter()
                        .find(|v| zb.contains(v))
                        .expect("each branch set holds a terminal")
                })
                .collect();
            let mut crossing = None;
            for quad in crossing_quadruples(order.len()) {
                if crossing_linkage(&h, &order, quad, bound)? {
                    crossing = Some(quad);
                    break;
                }
            }
            let named: Vec<usize> = order.iter().map(|&v| old[v]).collect();
            report.checks.push(ImpliedCheck {
                block: block_ids,
                claim: Claim::NoCrossingLinkage,
                holds: crossing.is_none(),
                detail: match crossing {
                    Some(q) => format!("crossing linkage at positions {q:?} of order {named:?}"),
                    None => format!("no crossing linkage in order {named:?}"),
                },
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{k23, k33, k4};
    use crate::testing::*;

    /// Independent check: label every vertex with a pattern vertex or
    /// "unused" and test the embedding conditions directly.
    pub(crate) fn slow_detect(g: &CapGraph, z: &[usize], p: &MinorPattern) -> bool {
        let h = p.len();
        let n = g.n();
        let mut label = vec![0usize; n];
        loop {
            let mut sets = vec![VertexSet::new(); h];
            for v in 0..n {
                if label[v] < h {
                    sets[label[v]].insert(v);
                }
            }
            if verify_embedding(g, z, p, &MinorEmbedding { branch_sets: sets }) {
                return true;
            }
            let mut i = 0;
            loop {
                if i == n {
                    return false;
                }
                label[i] += 1;
                if label[i] <= h {
                    break;
                }
                label[i] = 0;
                i += 1;
            }
        }
    }

    fn all(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn builtin_patterns() {
        assert_eq!(MinorPattern::k23().automorphisms().len(), 12);
        assert_eq!(MinorPattern::k4().automorphisms().len(), 24);
        assert_eq!(MinorPattern::k4_plus().automorphisms().len(), 4);
        assert_eq!(MinorPattern::cycle(6).unwrap().automorphisms().len(), 12);
        assert_eq!("cycle:5".parse::<MinorPattern>().unwrap(), MinorPattern::cycle(5).unwrap());
        assert!("cycle:2".parse::<MinorPattern>().is_err());
        assert!("k5".parse::<MinorPattern>().is_err());
    }

    #[test]
    fn k23_contains_itself() {
        let g = k23();
        let emb = detect_terminal_minor(&g, &all(5), &MinorPattern::k23(), 20).unwrap().unwrap();
        assert!(verify_embedding(&g, &all(5), &MinorPattern::k23(), &emb));
        assert!(emb.branch_sets.iter().all(|s| s.len() == 1));
    }

    #[test]
    fn k33_any_five_terminals() {
        let g = k33();
        for skip in 0..6 {
            let z: Vec<usize> = (0..6).filter(|&v| v != skip).collect();
            assert!(detect_terminal_minor(&g, &z, &MinorPattern::k23(), 20).unwrap().is_some());
        }
    }

    #[test]
    fn cycles_have_no_k23_or_k4() {
        let g = cycle(7);
        assert!(detect_terminal_minor(&g, &all(7), &MinorPattern::k23(), 20).unwrap().is_none());
        assert!(detect_terminal_minor(&g, &all(7), &MinorPattern::k4(), 20).unwrap().is_none());
        let six = cycle(6);
        assert!(detect_terminal_minor(&six, &all(6), &MinorPattern::cycle(6).unwrap(), 20)
            .unwrap()
            .is_some());
    }

    #[test]
    fn k4_is_found_in_k4() {
        let g = k4();
        assert!(detect_terminal_minor(&g, &all(4), &MinorPattern::k4(), 20).unwrap().is_some());
        assert!(detect_terminal_minor(&g, &all(4), &MinorPattern::k23(), 20).unwrap().is_none());
    }

    #[test]
    fn subdivided_k23_with_nonterminal_paths() {
        // K23 with every edge subdivided; only the five branch vertices are terminals
        let mut edges = Vec::new();
        let mut next = 5;
        for a in 0..2 {
            for b in 2..5 {
                edges.push((a, next, q(1)));
                edges.push((next, b, q(1)));
                next += 1;
            }
        }
        let g = CapGraph::new(next, edges, vec![]).unwrap();
        let emb = detect_terminal_minor(&g, &all(5), &MinorPattern::k23(), 20).unwrap().unwrap();
        assert!(verify_embedding(&g, &all(5), &MinorPattern::k23(), &emb));
    }

    #[test]
    fn injected_faults_fail_verification() {
        let g = k23();
        let p = MinorPattern::k23();
        let emb = detect_terminal_minor(&g, &all(5), &p, 20).unwrap().unwrap();
        let mut bad = emb.clone();
        bad.branch_sets[0] = vs(&[0, 1]);
        bad.branch_sets[1] = VertexSet::new();
        assert!(!verify_embedding(&g, &all(5), &p, &bad));
        // disconnected branch set: {u1, u2} has no internal edge
        let mut bad = emb.clone();
        bad.branch_sets[0] = vs(&[0, 1]);
        assert!(!verify_embedding(&g, &all(5), &p, &bad));
        // missing pattern edge: drop every edge at vertex 4
        let h = g.filter_edges(|e| e.u != 4 && e.v != 4);
        assert!(!verify_embedding(&h, &all(5), &p, &emb));
    }

    #[test]
    fn bound_is_inconclusive() {
        let g = cycle(21);
        let err = detect_terminal_minor(&g, &all(5), &MinorPattern::k23(), 20).unwrap_err();
        assert!(err.is_inconclusive());
    }

    #[test]
    fn cycle_linkage() {
        let g = cycle(5);
        for quad in crossing_quadruples(5) {
            assert!(!crossing_linkage(&g, &all(5), quad, 20).unwrap());
        }
        // chords 0-2 and 1-3 give disjoint crossing routes
        let mut edges: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5, q(1))).collect();
        edges.push((0, 2, q(1)));
        edges.push((1, 3, q(1)));
        let h = CapGraph::new(5, edges, vec![]).unwrap();
        assert!(crossing_linkage(&h, &all(5), (0, 1, 2, 3), 20).unwrap());
        assert!(crossing_linkage(&h, &all(5), (0, 2, 1, 3), 20).is_err());
    }

    #[test]
    fn implied_checks_on_a_cycle_and_k33() {
        let report = implied_minor_checks(&cycle(6), &all(6), 20).unwrap();
        assert!(report.violations().is_empty());
        assert!(report.checks.iter().any(|c| c.claim == Claim::SpanningCycle));
        let report = implied_minor_checks(&k33(), &[0, 1, 2, 3, 4], 20).unwrap();
        assert!(report.violations().is_empty());
    }

    #[test]
    fn small_graphs_agree_with_label_enumeration() {
        use crate::rng::{derive_seed, rng};
        use rand::Rng;
        for trial in 0..60 {
            let mut r = rng(derive_seed(7, "minor-oracle", trial));
            let n = r.gen_range(5..=7);
            let mut edges = Vec::new();
            for v in 1..n {
                edges.push((r.gen_range(0..v), v, q(1)));
            }
            for a in 0..n {
                for b in a + 1..n {
                    if r.gen_bool(0.3) {
                        edges.push((a, b, q(1)));
                    }
                }
            }
            let g = CapGraph::new(n, edges, vec![]).unwrap();
            let k = r.gen_range(4..=n);
            let z: Vec<usize> = (0..k).collect();
            for p in [MinorPattern::k23(), MinorPattern::k4()] {
                let fast = detect_terminal_minor(&g, &z, &p, 20).unwrap();
                assert_eq!(fast.is_some(), slow_detect(&g, &z, &p), "trial {trial} pattern {p}");
            }
        }
    }
}
