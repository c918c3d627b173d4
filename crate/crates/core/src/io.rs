//! Plain-text interchange format and DOT export.
//!
//! ```text
//! # comment
//! n m k
//! z1 z2 ... zk
//! u v cap            (m lines; cap is p, p/q, inf, inf+p/q, a*inf-p/q)
//! D s t p/q          (optional demands)
//! F: x y z : v1 v2   (optional 3-separated sets)
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gomory_hu::GomoryHuTree;
use crate::graph::Graph;
use crate::instances::ThreeSeparatedSet;
use crate::scalar::{parse_scalar, Capacity};
use crate::vset::VertexSet;

/// A graph file with its optional demand and 3-separated-set sections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document<C: Capacity> {
    pub graph: Graph<C>,
    pub demands: Vec<(usize, usize, C::Field)>,
    pub separated: Vec<ThreeSeparatedSet>,
}

impl<C: Capacity> Document<C> {
    pub fn from_graph(graph: Graph<C>) -> Self {
        Self {
            graph,
            demands: Vec::new(),
            separated: Vec::new(),
        }
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_usize(line: usize, tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| perr(line, format!("expected a vertex id or count, got `{tok}`")))
}

fn parse_vertex(line: usize, tok: &str, n: usize) -> Result<usize> {
    let v = parse_usize(line, tok)?;
    if v >= n {
        return Err(perr(line, format!("vertex {v} out of range (n = {n})")));
    }
    Ok(v)
}

fn parse_vertex_list(line: usize, s: &str, n: usize) -> Result<Vec<usize>> {
    s.split_whitespace().map(|t| parse_vertex(line, t, n)).collect()
}

pub fn parse_graph<C: Capacity>(text: &str) -> Result<Graph<C>> {
    let doc = parse_document::<C>(text)?;
    if !doc.demands.is_empty() || !doc.separated.is_empty() {
        return Err(perr(0, "unexpected demand or separated-set lines"));
    }
    Ok(doc.graph)
}

pub fn parse_document<C: Capacity>(text: &str) -> Result<Document<C>> {
    let mut lines = content_lines(text).peekable();
    let (hl, header) = lines.next().ok_or_else(|| perr(0, "empty input"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(perr(hl, "header must be `n m k`"));
    }
    let n = parse_usize(hl, fields[0])?;
    let m = parse_usize(hl, fields[1])?;
    let k = parse_usize(hl, fields[2])?;

    let mut terminals = Vec::new();
    if k > 0 {
        let (tl, tline) = lines.next().ok_or_else(|| perr(hl, "missing terminal line"))?;
        terminals = parse_vertex_list(tl, tline, n)?;
        if terminals.len() != k {
            return Err(perr(tl, format!("expected {k} terminals, found {}", terminals.len())));
        }
    }

    let mut edges = Vec::with_capacity(m);
    for i in 0..m {
        let (el, eline) = lines
            .next()
            .ok_or_else(|| perr(0, format!("expected {m} edges, found {i}")))?;
        let toks: Vec<&str> = eline.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(perr(el, "edge line must be `u v cap`"));
        }
        let u = parse_vertex(el, toks[0], n)?;
        let v = parse_vertex(el, toks[1], n)?;
        let c = C::parse_token(toks[2]).ok_or_else(|| perr(el, format!("bad capacity `{}`", toks[2])))?;
        edges.push((u, v, c));
    }
    let graph = Graph::new(n, edges, terminals).map_err(|e| perr(hl, e.to_string()))?;

    let mut demands = Vec::new();
    let mut separated = Vec::new();
    for (l, line) in lines {
        if let Some(rest) = line.strip_prefix("F:") {
            let (triple, interior) = rest
                .split_once(':')
                .ok_or_else(|| perr(l, "separated set must be `F: x y z : v1 v2 ...`"))?;
            let triple = parse_vertex_list(l, triple, n)?;
            let triple: [usize; 3] = triple
                .try_into()
                .map_err(|_| perr(l, "separated set needs exactly three attachment vertices"))?;
            let interior = parse_vertex_list(l, interior, n)?;
            separated.push(ThreeSeparatedSet { triple, interior });
        } else if let Some(rest) = line.strip_prefix('D') {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(perr(l, "demand line must be `D s t value`"));
            }
            let s = parse_vertex(l, toks[0], n)?;
            let t = parse_vertex(l, toks[1], n)?;
            let d = parse_scalar::<C::Field>(toks[2]).ok_or_else(|| perr(l, format!("bad demand `{}`", toks[2])))?;
            demands.push((s, t, d));
        } else {
            return Err(perr(l, format!("unexpected line `{line}`")));
        }
    }
    Ok(Document {
        graph,
        demands,
        separated,
    })
}

pub fn write_graph<C: Capacity>(g: &Graph<C>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", g.n(), g.m(), g.terminals().len());
    if !g.terminals().is_empty() {
        let _ = writeln!(out, "{}", join(g.terminals().iter()));
    }
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.capacity);
    }
    out
}

pub fn write_document<C: Capacity>(doc: &Document<C>) -> String {
    let mut out = write_graph(&doc.graph);
    for (s, t, d) in &doc.demands {
        let _ = writeln!(out, "D {s} {t} {d}");
    }
    for f in &doc.separated {
        let _ = writeln!(out, "F: {} : {}", join(f.triple.iter()), join(f.interior.iter()));
    }
    out
}

fn join<T: std::fmt::Display>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// One `a b cap` line per tree edge, then one `z: v1 v2 ...` line per bag.
pub fn write_tree<C: Capacity>(t: &GomoryHuTree<C>) -> String {
    let mut out = String::new();
    for e in &t.edges {
        let _ = writeln!(out, "{} {} {}", e.a, e.b, e.capacity);
    }
    for &z in &t.terminals {
        let _ = writeln!(out, "{z}: {}", join(t.bag(z).iter()));
    }
    out
}

/// Inverse of [`write_tree`]. Certificate shores are recomputed.
pub fn parse_tree<C: Capacity>(text: &str) -> Result<GomoryHuTree<C>> {
    let mut edges = Vec::new();
    let mut bags: Vec<(usize, Vec<usize>)> = Vec::new();
    for (l, line) in content_lines(text) {
        if let Some((z, rest)) = line.split_once(':') {
            let z = parse_usize(l, z.trim())?;
            let members = rest
                .split_whitespace()
                .map(|t| parse_usize(l, t))
                .collect::<Result<Vec<_>>>()?;
            bags.push((z, members));
        } else {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(perr(l, "tree edge must be `a b cap`"));
            }
            let a = parse_usize(l, toks[0])?;
            let b = parse_usize(l, toks[1])?;
            let c = C::parse_token(toks[2]).ok_or_else(|| perr(l, format!("bad capacity `{}`", toks[2])))?;
            edges.push((a, b, c));
        }
    }
    let n = bags
        .iter()
        .flat_map(|(z, vs)| vs.iter().chain(std::iter::once(z)))
        .max()
        .map_or(0, |&v| v + 1);
    let mut bag_of = vec![usize::MAX; n];
    let mut terminals = Vec::new();
    for (z, members) in bags {
        terminals.push(z);
        bag_of[z] = z;
        for v in members {
            bag_of[v] = z;
        }
    }
    GomoryHuTree::from_parts(n, terminals, bag_of, edges)
}

/// Extra drawing information for [`graph_dot`].
#[derive(Clone, Debug, Default)]
pub struct DotStyle {
    /// Labelled vertex groups drawn as clusters.
    pub clusters: Vec<(String, VertexSet)>,
    /// Edge ids drawn bold and red.
    pub highlight: BTreeSet<usize>,
}

impl DotStyle {
    pub fn with_bags<C: Capacity>(t: &GomoryHuTree<C>) -> Self {
        Self {
            clusters: t.terminals.iter().map(|&z| (format!("B({z})"), t.bag(z))).collect(),
            highlight: BTreeSet::new(),
        }
    }
}

fn node_line(out: &mut String, indent: &str, v: usize, terminal: bool) {
    let shape = if terminal { "doublecircle" } else { "circle" };
    let _ = writeln!(out, "{indent}{v} [shape={shape}];");
}

pub fn graph_dot<C: Capacity>(g: &Graph<C>, style: &DotStyle) -> String {
    let mut out = String::from("graph G {\n");
    let mut placed = VertexSet::new();
    for (i, (label, members)) in style.clusters.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{i} {{\n    label=\"{label}\";");
        for v in members.iter().filter(|&v| v < g.n()) {
            if placed.insert(v) {
                node_line(&mut out, "    ", v, g.is_terminal(v));
            }
        }
        out.push_str("  }\n");
    }
    for v in (0..g.n()).filter(|&v| !placed.contains(v)) {
        node_line(&mut out, "  ", v, g.is_terminal(v));
    }
    for e in g.edges() {
        let extra = if style.highlight.contains(&e.id) {
            ", color=red, penwidth=2.5"
        } else {
            ""
        };
        let _ = writeln!(out, "  {} -- {} [label=\"{}\"{extra}];", e.u, e.v, e.capacity);
    }
    out.push_str("}\n");
    out
}

/// The tree on its terminals, each terminal drawn inside a cluster holding
/// its bag.
pub fn tree_dot<C: Capacity>(t: &GomoryHuTree<C>) -> String {
    let mut out = String::from("graph T {\n");
    for (i, &z) in t.terminals.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{i} {{\n    label=\"B({z})\";");
        for v in t.bag(z).iter() {
            node_line(&mut out, "    ", v, v == z);
        }
        out.push_str("  }\n");
    }
    for e in &t.edges {
        let _ = writeln!(out, "  {} -- {} [label=\"{}\", penwidth=2];", e.a, e.b, e.capacity);
    }
    out.push_str("}\n");
    out
}
