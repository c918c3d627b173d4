//! Multicommodity flows: the cut condition, exact feasibility, maximum
//! concurrent flow and the flow-cut gap.
//!
//! Demands sharing a source are routed as one commodity (a single-source
//! flow with several sinks decomposes into paths to each sink, so this
//! loses nothing). Each commodity gets two non-negative variables per
//! edge, one per direction; infinite edges carry no capacity row.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instances::ThreeSeparatedSet;
use crate::lp::{Lp, LpOutcome, RowKind};
use crate::scalar::{Capacity, Scalar};
use crate::vset::VertexSet;
use num_traits::{One, Zero};

/// Default vertex bound for cut enumeration.
pub const DEFAULT_CUT_BOUND: usize = 18;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiflowInstance<C: Capacity> {
    pub supply: Graph<C>,
    /// `(s, t, value)`, both ends terminals of `supply`.
    pub demands: Vec<(usize, usize, C::Field)>,
}

impl<C: Capacity> MultiflowInstance<C> {
    pub fn new(supply: Graph<C>, demands: Vec<(usize, usize, C::Field)>) -> Result<Self> {
        for (s, t, d) in &demands {
            for x in [*s, *t] {
                if x >= supply.n() {
                    return Err(Error::VertexOutOfRange(x));
                }
                if !supply.is_terminal(x) {
                    return Err(Error::NotTerminal(x));
                }
            }
            if s == t {
                return Err(Error::Multiflow(format!("demand {s}-{t} has equal ends")));
            }
            if *d <= C::Field::zero() {
                return Err(Error::Multiflow(format!("demand {s}-{t} is not positive")));
            }
        }
        Ok(Self { supply, demands })
    }

    /// Every demand multiplied by `factor` (which must be positive).
    pub fn scaled(&self, factor: &C::Field) -> Self {
        Self {
            supply: self.supply.clone(),
            demands: self
                .demands
                .iter()
                .map(|(s, t, d)| (*s, *t, d.clone() * factor.clone()))
                .collect(),
        }
    }

    /// Total demand with exactly one end in `shore`.
    pub fn demand_across(&self, shore: &VertexSet) -> C::Field {
        self.demands
            .iter()
            .filter(|(s, t, _)| shore.contains(*s) != shore.contains(*t))
            .fold(C::Field::zero(), |acc, (_, _, d)| acc + d.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutCondition<C: Capacity> {
    Holds,
    Violated {
        shore: VertexSet,
        capacity: C,
        demand: C::Field,
    },
}

impl<C: Capacity> CutCondition<C> {
    pub fn holds(&self) -> bool {
        matches!(self, CutCondition::Holds)
    }
}

/// What one pass over all cuts learns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutScan<C: Capacity> {
    pub condition: CutCondition<C>,
    /// Smallest `capacity / demand` over finite cuts separating demand.
    pub min_ratio: Option<C::Field>,
    pub min_ratio_shore: Option<VertexSet>,
}

/// Enumerates every cut (shores containing vertex 0) in Gray-code order,
/// keeping capacity and separated demand up to date incrementally.
pub fn scan_cuts<C: Capacity>(inst: &MultiflowInstance<C>, bound: usize) -> Result<CutScan<C>> {
    let g = &inst.supply;
    let n = g.n();
    let limit = bound.min(40);
    if n > limit {
        return Err(Error::BoundExceeded {
            what: "cut enumeration",
            size: n,
            bound: limit,
        });
    }
    if n < 2 {
        return Err(Error::Invalid("need at least two vertices".into()));
    }
    let mut at: Vec<Vec<(usize, C::Field)>> = vec![Vec::new(); n];
    for (s, t, d) in &inst.demands {
        at[*s].push((*t, d.clone()));
        at[*t].push((*s, d.clone()));
    }
    let mut on = vec![false; n];
    on[0] = true;
    let mut cap = g.boundary_capacity(&VertexSet::singleton(0));
    let mut dem = at[0].iter().fold(C::Field::zero(), |acc, (_, d)| acc + d.clone());
    let mut condition = CutCondition::Holds;
    let mut min_ratio: Option<C::Field> = None;
    let mut min_ratio_shore = None;
    let shore_of = |on: &[bool]| -> VertexSet { (0..n).filter(|&v| on[v]).collect() };
    for step in 0u64..(1u64 << (n - 1)) {
        if step > 0 {
            let v = 1 + step.trailing_zeros() as usize;
            for &(w, id) in g.neighbors(v) {
                let c = g.edge(id).capacity.clone();
                cap = if on[w] == on[v] { cap + c } else { cap - c };
            }
            for (w, d) in &at[v] {
                dem = if on[*w] == on[v] {
                    dem + d.clone()
                } else {
                    dem - d.clone()
                };
            }
            on[v] = !on[v];
        }
        if on.iter().all(|&b| b) || dem <= C::Field::zero() {
            continue;
        }
        if condition.holds() && cap < C::from_field(dem.clone()) {
            condition = CutCondition::Violated {
                shore: shore_of(&on),
                capacity: cap.clone(),
                demand: dem.clone(),
            };
        }
        if cap.is_finite() {
            let ratio = cap.finite_part().clone() / dem.clone();
            if min_ratio.as_ref().is_none_or(|r| ratio < *r) {
                min_ratio = Some(ratio);
                min_ratio_shore = Some(shore_of(&on));
            }
        }
    }
    Ok(CutScan {
        condition,
        min_ratio,
        min_ratio_shore,
    })
}

/// Checks `c(δ(S)) >= demand across S` for every cut; cuts containing an
/// infinite edge never fail.
pub fn cut_condition<C: Capacity>(inst: &MultiflowInstance<C>, bound: usize) -> Result<CutCondition<C>> {
    Ok(scan_cuts(inst, bound)?.condition)
}

/// Flow of one commodity: all demands out of `source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommodityFlow<S> {
    pub source: usize,
    /// Per edge id, `(flow u→v, flow v→u)`.
    pub flow: Vec<(S, S)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasibilityCert<S> {
    Feasible {
        commodities: Vec<CommodityFlow<S>>,
    },
    Infeasible {
        /// Multipliers proving the flow LP infeasible.
        farkas: Vec<S>,
        /// A cut violating the cut condition, when one exists and the
        /// graph is small enough to enumerate.
        violated_cut: Option<VertexSet>,
    },
}

impl<S> FeasibilityCert<S> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityCert::Feasible { .. })
    }
}

struct FlowLp<S> {
    lp: Lp<S>,
    sources: Vec<usize>,
    lambda: Option<usize>,
}

/// Net supply of every commodity at every vertex.
fn supplies<C: Capacity>(inst: &MultiflowInstance<C>) -> BTreeMap<usize, Vec<C::Field>> {
    let n = inst.supply.n();
    let mut out: BTreeMap<usize, Vec<C::Field>> = BTreeMap::new();
    for (s, t, d) in &inst.demands {
        let b = out.entry(*s).or_insert_with(|| vec![C::Field::zero(); n]);
        b[*s] = b[*s].clone() + d.clone();
        b[*t] = b[*t].clone() - d.clone();
    }
    out
}

fn build_lp<C: Capacity>(inst: &MultiflowInstance<C>, concurrent: bool) -> FlowLp<C::Field> {
    let g = &inst.supply;
    let m = g.m();
    let supply = supplies(inst);
    let sources: Vec<usize> = supply.keys().copied().collect();
    let k = sources.len();
    let var = |c: usize, e: usize, back: bool| c * 2 * m + 2 * e + usize::from(back);
    let lambda = concurrent.then_some(2 * m * k);
    let mut lp = Lp::new(2 * m * k + usize::from(concurrent));
    let one = C::Field::one();
    for (c, s) in sources.iter().enumerate() {
        let b = &supply[s];
        for v in 0..g.n() {
            if v == *s {
                continue;
            }
            let mut coeffs = Vec::new();
            for &(_, id) in g.neighbors(v) {
                let e = g.edge(id);
                // out of v along the edge, then into v
                let (out, inn) = if e.u == v { (false, true) } else { (true, false) };
                coeffs.push((var(c, id, out), one.clone()));
                coeffs.push((var(c, id, inn), -one.clone()));
            }
            match lambda {
                Some(l) => {
                    if !b[v].is_zero() {
                        coeffs.push((l, -b[v].clone()));
                    }
                    lp.add_row(coeffs, RowKind::Eq, C::Field::zero());
                }
                None => lp.add_row(coeffs, RowKind::Eq, b[v].clone()),
            }
        }
    }
    for e in g.edges() {
        if !e.capacity.is_finite() {
            continue;
        }
        let coeffs = (0..k)
            .flat_map(|c| [(var(c, e.id, false), one.clone()), (var(c, e.id, true), one.clone())])
            .collect();
        lp.add_row(coeffs, RowKind::Le, e.capacity.finite_part().clone());
    }
    if let Some(l) = lambda {
        lp.objective = vec![(l, one)];
    }
    FlowLp { lp, sources, lambda }
}

fn extract<S: Scalar>(x: &[S], sources: &[usize], m: usize) -> Vec<CommodityFlow<S>> {
    sources
        .iter()
        .enumerate()
        .map(|(c, &source)| CommodityFlow {
            source,
            flow: (0..m)
                .map(|e| (x[c * 2 * m + 2 * e].clone(), x[c * 2 * m + 2 * e + 1].clone()))
                .collect(),
        })
        .collect()
}

/// Checks that `flows` route every demand exactly within capacity.
pub fn check_flows<C: Capacity>(inst: &MultiflowInstance<C>, flows: &[CommodityFlow<C::Field>]) -> bool {
    let g = &inst.supply;
    let supply = supplies(inst);
    if flows.len() != supply.len() {
        return false;
    }
    let mut load = vec![C::Field::zero(); g.m()];
    for f in flows {
        let Some(b) = supply.get(&f.source) else { return false };
        if f.flow.len() != g.m() {
            return false;
        }
        let mut net = vec![C::Field::zero(); g.n()];
        for e in g.edges() {
            let (fw, bw) = &f.flow[e.id];
            if *fw < C::Field::zero() || *bw < C::Field::zero() {
                return false;
            }
            let d = fw.clone() - bw.clone();
            net[e.u] = net[e.u].clone() + d.clone();
            net[e.v] = net[e.v].clone() - d;
            load[e.id] = load[e.id].clone() + fw.clone() + bw.clone();
        }
        if net != *b {
            return false;
        }
    }
    g.edges()
        .iter()
        .all(|e| !e.capacity.is_finite() || load[e.id] <= *e.capacity.finite_part())
}

/// Decides exactly whether all demands can be routed simultaneously.
pub fn feasible<C: Capacity>(inst: &MultiflowInstance<C>) -> Result<FeasibilityCert<C::Field>> {
    if inst.demands.is_empty() {
        return Ok(FeasibilityCert::Feasible {
            commodities: Vec::new(),
        });
    }
    let built = build_lp(inst, false);
    match built.lp.solve() {
        LpOutcome::Optimal { x, .. } => {
            let commodities = extract(&x, &built.sources, inst.supply.m());
            debug_assert!(check_flows(inst, &commodities));
            Ok(FeasibilityCert::Feasible { commodities })
        }
        LpOutcome::Infeasible { farkas } => {
            let violated_cut = if inst.supply.n() <= DEFAULT_CUT_BOUND {
                match cut_condition(inst, DEFAULT_CUT_BOUND)? {
                    CutCondition::Violated { shore, .. } => Some(shore),
                    CutCondition::Holds => None,
                }
            } else {
                None
            };
            Ok(FeasibilityCert::Infeasible { farkas, violated_cut })
        }
        LpOutcome::Unbounded => unreachable!("feasibility LP has no objective"),
    }
}

/// The largest `λ` such that `λ ·` demands is feasible.
pub fn max_concurrent_flow<C: Capacity>(inst: &MultiflowInstance<C>) -> Result<C::Field> {
    if inst.demands.is_empty() {
        return Err(Error::Multiflow("no demands".into()));
    }
    let built = build_lp(inst, true);
    match built.lp.solve() {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Unbounded => Err(Error::Multiflow(
            "concurrent flow is unbounded: every demand fits through infinite edges".into(),
        )),
        LpOutcome::Infeasible { .. } => {
            debug_assert!(built.lambda.is_some());
            unreachable!("the zero flow is feasible")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowCutGap<S> {
    pub min_cut_ratio: S,
    pub concurrent: S,
    pub gap: S,
}

/// `(min over cuts of capacity / demand) / λ*`.
pub fn flow_cut_gap<C: Capacity>(inst: &MultiflowInstance<C>, bound: usize) -> Result<FlowCutGap<C::Field>> {
    let scan = scan_cuts(inst, bound)?;
    let ratio = scan
        .min_ratio
        .ok_or_else(|| Error::Multiflow("no finite cut separates any demand".into()))?;
    let lambda = max_concurrent_flow(inst)?;
    Ok(FlowCutGap {
        gap: ratio.clone() / lambda.clone(),
        min_cut_ratio: ratio,
        concurrent: lambda,
    })
}

/// Routes triangle demands `[d_xy, d_yz, d_zx]` between the corners of a
/// 3-separated set inside the set itself (interior plus the edges
/// touching it).
pub fn k4_demand_route<C: Capacity>(
    g: &Graph<C>,
    f: &ThreeSeparatedSet,
    demands: [C::Field; 3],
) -> Result<FeasibilityCert<C::Field>> {
    let probe = g.with_terminals(Vec::new())?;
    f.validate(&probe)?;
    let mut label = vec![usize::MAX; g.n()];
    for (i, &t) in f.triple.iter().enumerate() {
        label[t] = i;
    }
    for (i, &v) in f.interior.iter().enumerate() {
        label[v] = i + 3;
    }
    let inside: VertexSet = f.interior.iter().copied().collect();
    let edges: Vec<(usize, usize, C)> = g
        .edges()
        .iter()
        .filter(|e| inside.contains(e.u) || inside.contains(e.v))
        .map(|e| (label[e.u], label[e.v], e.capacity.clone()))
        .collect();
    let h = Graph::new(f.interior.len() + 3, edges, vec![0, 1, 2])?;
    let pairs = [(0, 1), (1, 2), (2, 0)];
    let list = pairs
        .iter()
        .zip(demands)
        .filter(|(_, d)| *d > C::Field::zero())
        .map(|(&(a, b), d)| (a, b, d))
        .collect();
    let inst = MultiflowInstance::new(h, list)?;
    if let CutCondition::Violated { shore, capacity, demand } = cut_condition(&inst, DEFAULT_CUT_BOUND)? {
        let named: Vec<usize> = shore
            .iter()
            .map(|v| if v < 3 { f.triple[v] } else { f.interior[v - 3] })
            .collect();
        return Err(Error::Multiflow(format!(
            "cut condition fails inside the set: shore {named:?} has capacity {capacity} < demand {demand}"
        )));
    }
    feasible(&inst)
}
