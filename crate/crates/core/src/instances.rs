//! Seeded instance generators, the 3-separated-set star reduction, and
//! adversarial capacities built from a `K₂,₃` minor.
//!
//! Every generator is a pure function of its arguments and seed.
//! Random capacities are `p/q` with `1 <= p <= 12`, `1 <= q <= 6`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::mincut::max_flow;
use crate::minors::{verify_embedding, MinorEmbedding, MinorPattern};
use crate::multiflow::MultiflowInstance;
use crate::rng::{random_capacity, rng, DetRng};
use crate::scalar::{Capacity, Scalar, Tiered};
use crate::vset::VertexSet;
use crate::{CapGraph, Rational, TieredGraph};

const MAX_NUM: i64 = 12;
const MAX_DEN: i64 = 6;

fn cap(r: &mut DetRng) -> Rational {
    random_capacity(r, MAX_NUM, MAX_DEN)
}

/// Random triangulation of the polygon `poly` (vertices in boundary
/// order). Pushes the triangles and the diagonals used.
fn triangulate(poly: &[usize], r: &mut DetRng, faces: &mut Vec<[usize; 3]>, chords: &mut Vec<(usize, usize)>) {
    if poly.len() < 3 {
        return;
    }
    let last = poly.len() - 1;
    let apex = r.gen_range(1..last);
    faces.push([poly[0], poly[apex], poly[last]]);
    if apex > 1 {
        chords.push((poly[0], poly[apex]));
    }
    if apex < last - 1 {
        chords.push((poly[apex], poly[last]));
    }
    triangulate(&poly[..=apex], r, faces, chords);
    triangulate(&poly[apex..], r, faces, chords);
}

fn fan(poly: &[usize], faces: &mut Vec<[usize; 3]>, chords: &mut Vec<(usize, usize)>) {
    for i in 1..poly.len() - 1 {
        faces.push([poly[0], poly[i], poly[i + 1]]);
        if i > 1 {
            chords.push((poly[0], poly[i]));
        }
    }
}

fn outerplanar_edges(n: usize, r: &mut DetRng) -> Vec<(usize, usize)> {
    let poly: Vec<usize> = (0..n).collect();
    let mut faces = Vec::new();
    let mut chords = Vec::new();
    triangulate(&poly, r, &mut faces, &mut chords);
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges.extend(chords.into_iter().filter(|_| r.gen_bool(0.5)));
    edges
}

/// A 2-connected outerplanar graph: the cycle `0..n` plus a random subset
/// of the diagonals of a random triangulation. Every vertex is a terminal.
pub fn gen_outerplanar(n: usize, seed: u64) -> Result<CapGraph> {
    if n < 3 {
        return Err(Error::Invalid("an outerplanar block needs at least three vertices".into()));
    }
    let mut r = rng(seed);
    let edges: Vec<_> = outerplanar_edges(n, &mut r)
        .into_iter()
        .map(|(u, v)| (u, v, cap(&mut r)))
        .collect();
    CapGraph::new(n, edges, (0..n).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockSpec {
    Outerplanar(usize),
    K4,
}

impl std::str::FromStr for BlockSpec {
    type Err = Error;

    /// `k4`, or `o<n>` for an outerplanar block on `n` vertices.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "k4" {
            return Ok(Self::K4);
        }
        s.strip_prefix('o')
            .and_then(|n| n.parse().ok())
            .filter(|&n: &usize| n >= 3)
            .map(Self::Outerplanar)
            .ok_or_else(|| Error::Invalid(format!("bad block spec '{s}'")))
    }
}

/// Blocks glued one after another, each at a random vertex already
/// present. Every vertex is a terminal.
pub fn gen_onesum(blocks: &[BlockSpec], seed: u64) -> Result<CapGraph> {
    if blocks.is_empty() {
        return Err(Error::Invalid("need at least one block".into()));
    }
    let mut r = rng(seed);
    let mut n = 0usize;
    let mut edges = Vec::new();
    for (i, block) in blocks.iter().enumerate() {
        let local: Vec<(usize, usize)> = match *block {
            BlockSpec::K4 => (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).collect(),
            BlockSpec::Outerplanar(k) if k >= 3 => outerplanar_edges(k, &mut r),
            BlockSpec::Outerplanar(_) => {
                return Err(Error::Invalid("outerplanar blocks need at least three vertices".into()))
            }
        };
        let size = match *block {
            BlockSpec::K4 => 4,
            BlockSpec::Outerplanar(k) => k,
        };
        // local vertex 0 is the shared vertex, the rest are new
        let glue = if i == 0 { 0 } else { r.gen_range(0..n) };
        let base = if i == 0 { 0 } else { n - 1 };
        let id = |x: usize| if x == 0 { glue } else { base + x };
        for (a, b) in local {
            edges.push((id(a), id(b), cap(&mut r)));
        }
        n = if i == 0 { size } else { n + size - 1 };
    }
    CapGraph::new(n, edges, (0..n).collect())
}

/// A connected graph on `n` vertices: a random spanning tree plus each
/// other pair with probability `density`.
pub fn gen_random_connected(n: usize, density: f64, seed: u64) -> Result<CapGraph> {
    if n < 2 {
        return Err(Error::Invalid("need at least two vertices".into()));
    }
    let mut r = rng(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut r);
    let mut edges = Vec::new();
    let mut present = VertexSet::new();
    for i in 1..n {
        let (a, b) = (order[r.gen_range(0..i)], order[i]);
        present.insert(a.min(b) * n + a.max(b));
        edges.push((a, b, cap(&mut r)));
    }
    for a in 0..n {
        for b in a + 1..n {
            if !present.contains(a * n + b) && r.gen_bool(density) {
                edges.push((a, b, cap(&mut r)));
            }
        }
    }
    CapGraph::new(n, edges, (0..n).collect())
}

/// A random subdivision of `K₂,₃` (each edge a path of length 1 to 3)
/// with `extra` additional vertices attached by random edges. Every
/// vertex is a terminal; vertices `0..5` are the branch vertices.
pub fn gen_k23_host(extra: usize, seed: u64) -> Result<CapGraph> {
    let mut r = rng(seed);
    let mut n = 5;
    let mut edges = Vec::new();
    for a in 0..2 {
        for b in 2..5 {
            let len = r.gen_range(1..=3);
            let mut prev = a;
            for _ in 1..len {
                edges.push((prev, n, cap(&mut r)));
                prev = n;
                n += 1;
            }
            edges.push((prev, b, cap(&mut r)));
        }
    }
    for _ in 0..extra {
        let v = n;
        n += 1;
        let first = r.gen_range(0..v);
        edges.push((first, v, cap(&mut r)));
        if r.gen_bool(0.5) {
            let second = r.gen_range(0..v);
            if second != first {
                edges.push((second, v, cap(&mut r)));
            }
        }
    }
    CapGraph::new(n, edges, (0..n).collect())
}

/// A random capacitated subgraph: each edge kept with probability `keep`,
/// then dropped edges are restored (in random order) until the graph is
/// connected again. Capacities are drawn afresh.
pub fn gen_subgraph<C: Capacity>(g: &Graph<C>, keep: f64, seed: u64) -> Result<CapGraph> {
    let mut r = rng(seed);
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for e in g.edges() {
        if r.gen_bool(keep) {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            parent[a] = b;
            kept.push((e.u, e.v));
        } else {
            dropped.push((e.u, e.v));
        }
    }
    dropped.shuffle(&mut r);
    for (u, v) in dropped {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            kept.push((u, v));
        }
    }
    kept.sort_unstable();
    let edges: Vec<_> = kept.into_iter().map(|(u, v)| (u, v, cap(&mut r))).collect();
    let sub = CapGraph::new(g.n(), edges, g.terminals().to_vec())?;
    sub.ensure_connected()?;
    Ok(sub)
}

/// A subgraph attached to three vertices of an inner face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeSeparatedSet {
    pub triple: [usize; 3],
    pub interior: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Triangulation {
    #[default]
    Random,
    /// All diagonals from terminal 0.
    Fan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SubgraphPass {
    #[default]
    Off,
    /// Delete random planar edges while the graph stays connected.
    Connected,
    /// Delete random planar edges while the graph stays 2-connected.
    Biconnected,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZWebSpec {
    /// Number of terminals on the outer cycle.
    pub k: usize,
    /// Interior vertices added by subdividing random faces.
    pub interior: usize,
    pub triangulation: Triangulation,
    /// Clique size of each attachment; each goes into a different inner face.
    pub attachments: Vec<usize>,
    pub subgraph: SubgraphPass,
}

impl ZWebSpec {
    pub fn plain(k: usize) -> Self {
        Self {
            k,
            interior: 0,
            triangulation: Triangulation::Random,
            attachments: Vec::new(),
            subgraph: SubgraphPass::Off,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.k + self.interior + self.attachments.iter().sum::<usize>()
    }
}

#[derive(Clone, Debug)]
pub struct ZWeb {
    /// Terminals are `0..k` in outer-cycle order.
    pub graph: CapGraph,
    pub faces: Vec<[usize; 3]>,
    pub separated: Vec<ThreeSeparatedSet>,
}

/// A disc triangulation with the terminals `0..k` on the outer cycle,
/// interior vertices by stellar subdivision, and clique attachments
/// joined to all three corners of distinct inner faces.
pub fn gen_zweb(spec: &ZWebSpec, seed: u64) -> Result<ZWeb> {
    if spec.k < 3 {
        return Err(Error::Invalid("a web needs at least three terminals".into()));
    }
    if spec.attachments.contains(&0) {
        return Err(Error::Invalid("attachment cliques need at least one vertex".into()));
    }
    let mut r = rng(seed);
    let k = spec.k;
    let poly: Vec<usize> = (0..k).collect();
    let mut faces = Vec::new();
    let mut chords = Vec::new();
    match spec.triangulation {
        Triangulation::Random => triangulate(&poly, &mut r, &mut faces, &mut chords),
        Triangulation::Fan => fan(&poly, &mut faces, &mut chords),
    }
    let mut planar: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
    planar.extend(chords);
    let mut n = k;
    for _ in 0..spec.interior {
        let f = r.gen_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(f);
        let w = n;
        n += 1;
        planar.extend([(w, a), (w, b), (w, c)]);
        faces.extend([[a, b, w], [b, c, w], [a, c, w]]);
    }
    if spec.attachments.len() > faces.len() {
        return Err(Error::Invalid(format!(
            "{} attachments but only {} inner faces",
            spec.attachments.len(),
            faces.len()
        )));
    }
    let mut face_ids: Vec<usize> = (0..faces.len()).collect();
    face_ids.shuffle(&mut r);
    let mut attached: Vec<(usize, usize)> = Vec::new();
    let mut separated = Vec::new();
    for (&m, &f) in spec.attachments.iter().zip(&face_ids) {
        let triple = faces[f];
        let interior: Vec<usize> = (n..n + m).collect();
        n += m;
        for (i, &x) in interior.iter().enumerate() {
            for &y in &interior[i + 1..] {
                attached.push((x, y));
            }
            for &t in &triple {
                attached.push((x, t));
            }
        }
        separated.push(ThreeSeparatedSet { triple, interior });
    }
    if spec.subgraph != SubgraphPass::Off {
        let mut order: Vec<usize> = (0..planar.len()).collect();
        order.shuffle(&mut r);
        let mut keep = vec![true; planar.len()];
        for i in order {
            if !r.gen_bool(0.35) {
                continue;
            }
            keep[i] = false;
            let trial: Vec<(usize, usize, Rational)> = planar
                .iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(&(a, b), _)| (a, b, Rational::from_int(1)))
                .chain(attached.iter().map(|&(a, b)| (a, b, Rational::from_int(1))))
                .collect();
            let g = CapGraph::new(n, trial, vec![])?;
            let ok = match spec.subgraph {
                SubgraphPass::Connected => g.is_connected(),
                _ => g.is_biconnected(),
            };
            if !ok {
                keep[i] = true;
            }
        }
        planar = planar.into_iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| e).collect();
    }
    let edges: Vec<_> = planar
        .into_iter()
        .chain(attached)
        .map(|(a, b)| (a, b, cap(&mut r)))
        .collect();
    let graph = CapGraph::new(n, edges, (0..k).collect())?;
    Ok(ZWeb { graph, faces, separated })
}

impl ThreeSeparatedSet {
    /// Checks the set against `g`: interior non-empty, free of terminals
    /// and of the triple, and adjacent only to itself and the triple.
    pub fn validate<C: Capacity>(&self, g: &Graph<C>) -> Result<()> {
        let [x, y, z] = self.triple;
        if x == y || y == z || x == z || self.triple.iter().any(|&t| t >= g.n()) {
            return Err(Error::SeparatedSet("triple must be three distinct vertices".into()));
        }
        if self.interior.is_empty() {
            return Err(Error::SeparatedSet("empty interior".into()));
        }
        let inside: VertexSet = self.interior.iter().copied().collect();
        if inside.len() != self.interior.len() || self.interior.iter().any(|&v| v >= g.n()) {
            return Err(Error::SeparatedSet("bad interior vertex list".into()));
        }
        if self.triple.iter().any(|&t| inside.contains(t)) {
            return Err(Error::SeparatedSet("interior meets the triple".into()));
        }
        if let Some(&t) = self.interior.iter().find(|&&v| g.is_terminal(v)) {
            return Err(Error::SeparatedSet(format!("interior holds terminal {t}")));
        }
        for &v in &self.interior {
            for &(w, _) in g.neighbors(v) {
                if !inside.contains(w) && !self.triple.contains(&w) {
                    return Err(Error::SeparatedSet(format!(
                        "interior vertex {v} has a neighbour {w} outside the set"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Result of a star reduction.
#[derive(Clone, Debug)]
pub struct Reduced<C> {
    pub graph: Graph<C>,
    /// New id of every old vertex; `None` for removed interior vertices.
    pub map: Vec<Option<usize>>,
    /// The new centre vertex.
    pub center: usize,
    /// `c_x, c_y, c_z` in triple order.
    pub star: [C; 3],
}

/// Replaces the interior of `f` by one vertex joined to the triple, with
/// `c_α` the minimum cut inside `F` between `α` and the other two corners.
/// Zero-capacity star edges are left out.
pub fn star_reduce<C: Capacity>(g: &Graph<C>, f: &ThreeSeparatedSet) -> Result<Reduced<C>> {
    f.validate(g)?;
    let inside: VertexSet = f.interior.iter().copied().collect();
    let mut star: Vec<C> = Vec::with_capacity(3);
    for a in 0..3 {
        // F with the two other corners merged: 0 = α, 1 = the others, 2.. interior
        let mut label = vec![usize::MAX; g.n()];
        label[f.triple[a]] = 0;
        label[f.triple[(a + 1) % 3]] = 1;
        label[f.triple[(a + 2) % 3]] = 1;
        for (i, &v) in f.interior.iter().enumerate() {
            label[v] = i + 2;
        }
        let edges: Vec<(usize, usize, C)> = g
            .edges()
            .iter()
            .filter(|e| inside.contains(e.u) || inside.contains(e.v))
            .map(|e| (label[e.u], label[e.v], e.capacity.clone()))
            .collect();
        let h = Graph::new(f.interior.len() + 2, edges, vec![])?;
        star.push(max_flow(&h, 0, 1)?.value);
    }
    let mut map = vec![None; g.n()];
    let mut next = 0;
    for v in 0..g.n() {
        if !inside.contains(v) {
            map[v] = Some(next);
            next += 1;
        }
    }
    let center = next;
    let mut edges: Vec<(usize, usize, C)> = g
        .edges()
        .iter()
        .filter(|e| !inside.contains(e.u) && !inside.contains(e.v))
        .map(|e| (map[e.u].unwrap(), map[e.v].unwrap(), e.capacity.clone()))
        .collect();
    for (a, c) in star.iter().enumerate() {
        if *c > C::zero() {
            edges.push((center, map[f.triple[a]].unwrap(), c.clone()));
        }
    }
    let terminals = g.terminals().iter().map(|&z| map[z].unwrap()).collect();
    let graph = Graph::new(next + 1, edges, terminals)?;
    let [x, y, z]: [C; 3] = star.try_into().map_err(|_| Error::Invalid("star has three arms".into()))?;
    Ok(Reduced {
        graph,
        map,
        center,
        star: [x, y, z],
    })
}

/// Star-reduces every declared set in turn. Interiors must be pairwise
/// disjoint and no triple may use another set's interior.
pub fn reduce_all<C: Capacity>(g: &Graph<C>, sets: &[ThreeSeparatedSet]) -> Result<Graph<C>> {
    for (i, a) in sets.iter().enumerate() {
        let ia: VertexSet = a.interior.iter().copied().collect();
        for (j, b) in sets.iter().enumerate() {
            if i == j {
                continue;
            }
            let ib: VertexSet = b.interior.iter().copied().collect();
            if !ia.is_disjoint(&ib) || b.triple.iter().any(|&t| ia.contains(t)) {
                return Err(Error::SeparatedSet(format!("sets {i} and {j} overlap")));
            }
        }
    }
    let mut cur = g.clone();
    let mut remap: Vec<Option<usize>> = (0..g.n()).map(Some).collect();
    for f in sets {
        let moved = ThreeSeparatedSet {
            triple: f.triple.map(|t| remap[t].expect("triples survive earlier reductions")),
            interior: f
                .interior
                .iter()
                .map(|&v| remap[v].expect("interiors are disjoint"))
                .collect(),
        };
        let red = star_reduce(&cur, &moved)?;
        remap = remap.iter().map(|m| m.and_then(|v| red.map[v])).collect();
        cur = red.graph;
    }
    Ok(cur)
}

/// Adversarial capacities from a `K₂,₃` terminal minor: the graph is cut
/// down to the union of the branch sets, edges inside a branch set become
/// infinite, one edge per pattern edge gets capacity 1, and every other
/// edge is deleted.
#[derive(Clone, Debug)]
pub struct Adversarial {
    /// Terminals are the five branch terminals, in pattern order.
    pub graph: TieredGraph,
    /// Original id of every vertex of `graph`.
    pub old_ids: Vec<usize>,
    /// Unit demand between the two degree-3 branch terminals and a unit
    /// triangle on the three degree-2 ones.
    pub instance: MultiflowInstance<Tiered<Rational>>,
}

pub fn adversarial_capacities<C: Capacity>(
    g: &Graph<C>,
    z: &[usize],
    emb: &MinorEmbedding,
) -> Result<Adversarial> {
    let p = MinorPattern::k23();
    if !verify_embedding(g, z, &p, emb) {
        return Err(Error::InvalidEmbedding("not a terminal K23 embedding of this graph".into()));
    }
    let support = emb
        .branch_sets
        .iter()
        .fold(VertexSet::new(), |acc, s| acc.union(s));
    let old_ids = support.to_vec();
    let mut new_id = vec![usize::MAX; g.n()];
    for (i, &v) in old_ids.iter().enumerate() {
        new_id[v] = i;
    }
    let owner = |v: usize| emb.branch_sets.iter().position(|s| s.contains(v));
    let mut edges: Vec<(usize, usize, Tiered<Rational>)> = Vec::new();
    for e in g.edges() {
        if let (Some(a), Some(b)) = (owner(e.u), owner(e.v)) {
            if a == b {
                edges.push((new_id[e.u], new_id[e.v], Tiered::infinity()));
            }
        }
    }
    for &(a, b) in &p.edges {
        let e = g
            .edges()
            .iter()
            .find(|e| {
                (emb.branch_sets[a].contains(e.u) && emb.branch_sets[b].contains(e.v))
                    || (emb.branch_sets[a].contains(e.v) && emb.branch_sets[b].contains(e.u))
            })
            .expect("verified embeddings realise every pattern edge");
        edges.push((new_id[e.u], new_id[e.v], Tiered::finite(Rational::from_int(1))));
    }
    let zs: VertexSet = z.iter().copied().collect();
    let terms: Vec<usize> = emb
        .branch_sets
        .iter()
        .map(|s| new_id[s.iter().find(|&v| zs.contains(v)).expect("branch sets hold terminals")])
        .collect();
    let graph = Graph::new(old_ids.len(), edges, terms.clone())?;
    let one = Rational::from_int(1);
    let demands = vec![
        (terms[0], terms[1], one.clone()),
        (terms[2], terms[3], one.clone()),
        (terms[3], terms[4], one.clone()),
        (terms[2], terms[4], one),
    ];
    let instance = MultiflowInstance::new(graph.clone(), demands)?;
    Ok(Adversarial {
        graph,
        old_ids,
        instance,
    })
}

/// [`adversarial_capacities`] for an embedding found by the caller's
/// minor search; kept as a separate name for the CLI and suites.
pub fn gen_adversarial_from_minor<C: Capacity>(
    g: &Graph<C>,
    z: &[usize],
    emb: &MinorEmbedding,
) -> Result<Adversarial> {
    adversarial_capacities(g, z, emb)
}

/// Same graph with every vertex a terminal.
pub fn all_terminals<C: Capacity>(g: &Graph<C>) -> Graph<C> {
    g.with_terminals((0..g.n()).collect()).expect("every vertex is in range")
}
