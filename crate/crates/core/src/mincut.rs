//! Exact max-flow / min-cut and a brute-force cut oracle.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Cut, Graph};
use crate::scalar::Capacity;
use crate::vset::VertexSet;

/// Default vertex bound for subset enumeration.
pub const DEFAULT_ORACLE_BOUND: usize = 16;

#[derive(Clone, Debug)]
pub struct FlowResult<C> {
    pub value: C,
    /// Residual-reachable set of the source.
    pub min_cut: Cut<C>,
    /// Signed flow per edge id; positive means from `edge.u` to `edge.v`.
    pub flow: Vec<C>,
}

/// Shortest-augmenting-path (Edmonds-Karp) maximum flow.
///
/// Works for any ordered capacity group, including symbolic infinities.
pub fn max_flow<C: Capacity>(g: &Graph<C>, s: usize, t: usize) -> Result<FlowResult<C>> {
    let n = g.n();
    if s >= n {
        return Err(Error::VertexOutOfRange(s));
    }
    if t >= n {
        return Err(Error::VertexOutOfRange(t));
    }
    if s == t {
        return Err(Error::SameEndpoints);
    }
    let mut flow = vec![C::zero(); g.m()];
    // residual capacity of traversing edge `id` starting at vertex `from`
    let residual = |flow: &[C], id: usize, from: usize| -> C {
        let e = g.edge(id);
        if from == e.u {
            e.capacity.clone() - flow[id].clone()
        } else {
            e.capacity.clone() + flow[id].clone()
        }
    };
    let mut value = C::zero();
    loop {
        let mut pred: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            if v == t {
                break;
            }
            for &(w, id) in g.neighbors(v) {
                if !seen[w] && residual(&flow, id, v) > C::zero() {
                    seen[w] = true;
                    pred[w] = Some((v, id));
                    queue.push_back(w);
                }
            }
        }
        if !seen[t] {
            let shore: VertexSet = (0..n).filter(|&v| seen[v]).collect();
            let capacity = g.boundary_capacity(&shore);
            debug_assert_eq!(capacity, value);
            return Ok(FlowResult {
                value,
                min_cut: Cut { shore, capacity },
                flow,
            });
        }
        let mut bottleneck: Option<C> = None;
        let mut v = t;
        while let Some((p, id)) = pred[v] {
            let r = residual(&flow, id, p);
            bottleneck = Some(match bottleneck {
                Some(b) if b <= r => b,
                _ => r,
            });
            v = p;
        }
        let delta = bottleneck.expect("augmenting path has at least one edge");
        let mut v = t;
        while let Some((p, id)) = pred[v] {
            let f = flow[id].clone();
            flow[id] = if p == g.edge(id).u {
                f + delta.clone()
            } else {
                f - delta.clone()
            };
            v = p;
        }
        value = value + delta;
    }
}

fn check_bound<C: Capacity>(g: &Graph<C>, bound: usize) -> Result<()> {
    let limit = bound.min(63);
    if g.n() > limit {
        return Err(Error::BoundExceeded {
            what: "cut enumeration",
            size: g.n(),
            bound: limit,
        });
    }
    Ok(())
}

/// Capacity of `δ(mask)` for a bitmask shore.
pub fn mask_cut_capacity<C: Capacity>(g: &Graph<C>, mask: u64) -> C {
    g.edges()
        .iter()
        .filter(|e| (mask >> e.u & 1) != (mask >> e.v & 1))
        .fold(C::zero(), |acc, e| acc + e.capacity.clone())
}

/// Minimum `st`-cut by enumerating all `2^{n-2}` shores containing `s`
/// and not `t`. Ties go to the numerically smallest shore mask.
pub fn brute_min_cut<C: Capacity>(g: &Graph<C>, s: usize, t: usize, bound: usize) -> Result<Cut<C>> {
    let (best, _) = brute_min_cut_with_count(g, s, t, bound)?;
    Ok(best)
}

/// Like [`brute_min_cut`], also returning how many shores attain the minimum.
pub fn brute_min_cut_with_count<C: Capacity>(
    g: &Graph<C>,
    s: usize,
    t: usize,
    bound: usize,
) -> Result<(Cut<C>, usize)> {
    check_bound(g, bound)?;
    let n = g.n();
    if s >= n || t >= n {
        return Err(Error::VertexOutOfRange(s.max(t)));
    }
    if s == t {
        return Err(Error::SameEndpoints);
    }
    let free: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut best: Option<(C, u64)> = None;
    let mut count = 0;
    for bits in 0u64..(1 << free.len()) {
        let mut mask = 1u64 << s;
        for (i, &v) in free.iter().enumerate() {
            if bits >> i & 1 == 1 {
                mask |= 1 << v;
            }
        }
        let cap = mask_cut_capacity(g, mask);
        match &best {
            Some((b, _)) if cap > *b => {}
            Some((b, _)) if cap == *b => count += 1,
            _ => {
                best = Some((cap, mask));
                count = 1;
            }
        }
    }
    let (capacity, mask) = best.expect("at least one shore");
    Ok((
        Cut {
            shore: VertexSet::from_mask(mask),
            capacity,
        },
        count,
    ))
}

/// Minimum cut capacity for every split of the terminals, by enumerating
/// all shores in Gray-code order. Key bit `i` says whether `terminals[i]`
/// is on the shore; only keys with bit 0 set appear (a cut and its
/// complement are the same cut), and splits with an empty side are left out.
pub fn brute_terminal_cuts<C: Capacity>(
    g: &Graph<C>,
    terminals: &[usize],
    bound: usize,
) -> Result<BTreeMap<u64, C>> {
    check_bound(g, bound)?;
    let n = g.n();
    if terminals.is_empty() || terminals.len() > 63 {
        return Err(Error::Invalid("need between 1 and 63 terminals".into()));
    }
    for &z in terminals {
        if z >= n {
            return Err(Error::VertexOutOfRange(z));
        }
    }
    // vertex 0 of the enumeration is terminals[0], always on the shore
    let anchor = terminals[0];
    let others: Vec<usize> = (0..n).filter(|&v| v != anchor).collect();
    let full_key = (1u64 << terminals.len()) - 1;
    let mut on_shore = vec![false; n];
    on_shore[anchor] = true;
    let mut cap = g.boundary_capacity(&VertexSet::singleton(anchor));
    let mut best: BTreeMap<u64, C> = BTreeMap::new();
    let key_of = |on: &[bool]| {
        terminals
            .iter()
            .enumerate()
            .fold(0u64, |k, (i, &z)| if on[z] { k | 1 << i } else { k })
    };
    let record = |key: u64, cap: &C, best: &mut BTreeMap<u64, C>| {
        if key != full_key {
            match best.get(&key) {
                Some(b) if b <= cap => {}
                _ => {
                    best.insert(key, cap.clone());
                }
            }
        }
    };
    record(key_of(&on_shore), &cap, &mut best);
    for step in 1u64..(1u64 << others.len()) {
        let v = others[step.trailing_zeros() as usize];
        // flipping v changes the status of every edge at v
        for &(w, id) in g.neighbors(v) {
            let c = g.edge(id).capacity.clone();
            if on_shore[w] == on_shore[v] {
                cap = cap + c;
            } else {
                cap = cap - c;
            }
        }
        on_shore[v] = !on_shore[v];
        record(key_of(&on_shore), &cap, &mut best);
    }
    Ok(best)
}

/// `λ` for every terminal pair from [`brute_terminal_cuts`].
pub fn brute_lambda_matrix<C: Capacity>(g: &Graph<C>, terminals: &[usize], bound: usize) -> Result<LambdaMatrix<C>> {
    let cuts = brute_terminal_cuts(g, terminals, bound)?;
    let mut values = BTreeMap::new();
    for i in 0..terminals.len() {
        for j in i + 1..terminals.len() {
            let v = cuts
                .iter()
                .filter(|(k, _)| (*k >> i & 1) != (*k >> j & 1))
                .map(|(_, c)| c.clone())
                .min()
                .expect("some cut separates two distinct terminals");
            let (a, b) = (terminals[i], terminals[j]);
            values.insert((a.min(b), a.max(b)), v);
        }
    }
    Ok(LambdaMatrix {
        terminals: terminals.to_vec(),
        values,
    })
}

/// All-pairs `λ` over a terminal set, keyed by `(min, max)` vertex pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaMatrix<C> {
    pub terminals: Vec<usize>,
    pub values: BTreeMap<(usize, usize), C>,
}

impl<C: Clone> LambdaMatrix<C> {
    pub fn get(&self, a: usize, b: usize) -> Option<&C> {
        self.values.get(&(a.min(b), a.max(b)))
    }
}

pub fn lambda_matrix<C: Capacity>(g: &Graph<C>, terminals: &[usize]) -> Result<LambdaMatrix<C>> {
    if terminals.len() < 2 {
        return Err(Error::Invalid("need at least two terminals".into()));
    }
    let mut values = BTreeMap::new();
    for (i, &a) in terminals.iter().enumerate() {
        for &b in &terminals[i + 1..] {
            values.insert((a.min(b), a.max(b)), max_flow(g, a, b)?.value);
        }
    }
    Ok(LambdaMatrix {
        terminals: terminals.to_vec(),
        values,
    })
}
