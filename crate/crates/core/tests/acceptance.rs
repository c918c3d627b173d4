//! Acceptance run: one PASS/FAIL line per criterion, each with a pinned
//! wall-clock budget. Cut values are checked against the brute-force
//! oracles below, which share no code with the library's algorithms.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::Rng;

use ghminor::embedding::{check_bag_minor, check_weak_bag_minor, is_gh_subgraph};
use ghminor::fixtures::{k23, k33, U1, U2};
use ghminor::gomory_hu::build_gh_tree;
use ghminor::instances::{
    all_terminals, gen_adversarial_from_minor, gen_k23_host, gen_onesum, gen_random_connected, gen_subgraph,
    gen_zweb, reduce_all, SubgraphPass, Triangulation, ZWebSpec,
};
use ghminor::mincut::lambda_matrix;
use ghminor::minors::{detect_terminal_minor, MinorPattern};
use ghminor::multiflow::{check_flows, feasible, flow_cut_gap, max_concurrent_flow, FeasibilityCert, MultiflowInstance};
use ghminor::perturb::{deperturb, grid_denominator, perturb};
use ghminor::rng::{derive_seed, random_capacity, rng};
use ghminor::suite::random_block_specs;
use ghminor::{Capacity, Graph, Rational, Scalar};

const ROOT_SEED: u64 = 20_240_601;

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

// ---- oracles -------------------------------------------------------------

fn cut_value<C: Capacity>(g: &Graph<C>, shore: u64) -> C {
    g.edges()
        .iter()
        .filter(|e| (shore >> e.u & 1) != (shore >> e.v & 1))
        .fold(C::zero(), |acc, e| acc + e.capacity.clone())
}

/// Minimum `s`-`t` cut value, its shore (containing `s`) and how many
/// shores attain it.
fn oracle_min_cut<C: Capacity>(g: &Graph<C>, s: usize, t: usize) -> (C, u64, usize) {
    let mut best: Option<(C, u64, usize)> = None;
    for shore in 0u64..1 << g.n() {
        if shore >> s & 1 == 0 || shore >> t & 1 == 1 {
            continue;
        }
        let c = cut_value(g, shore);
        best = match best {
            Some((b, m, k)) if b < c => Some((b, m, k)),
            Some((b, m, k)) if b == c => Some((b, m, k + 1)),
            _ => Some((c, shore, 1)),
        };
    }
    best.expect("s != t")
}

/// Minimum cut for each split of `z`, keyed by the terminals on the side
/// of `z[0]`.
fn oracle_terminal_cuts<C: Capacity>(g: &Graph<C>, z: &[usize]) -> BTreeMap<u64, C> {
    let full = (1u64 << z.len()) - 1;
    let mut out: BTreeMap<u64, C> = BTreeMap::new();
    for shore in 0u64..1 << g.n() {
        if shore >> z[0] & 1 == 0 {
            continue;
        }
        let key = z
            .iter()
            .enumerate()
            .fold(0u64, |k, (i, &v)| k | (shore >> v & 1) << i);
        if key == full {
            continue;
        }
        let c = cut_value(g, shore);
        if out.get(&key).is_none_or(|b| c < *b) {
            out.insert(key, c);
        }
    }
    out
}

fn oracle_lambda<C: Capacity>(cuts: &BTreeMap<u64, C>, i: usize, j: usize) -> C {
    cuts.iter()
        .filter(|(k, _)| (*k >> i & 1) != (*k >> j & 1))
        .map(|(_, c)| c.clone())
        .min()
        .expect("some split separates i and j")
}

/// Whether some cut carries less capacity than the demand across it.
fn oracle_cut_condition<C: Capacity>(inst: &MultiflowInstance<C>) -> bool {
    let g = &inst.supply;
    (1u64..1 << (g.n() - 1)).all(|half| {
        let shore = half << 1;
        let demand = inst
            .demands
            .iter()
            .filter(|(s, t, _)| (shore >> s & 1) != (shore >> t & 1))
            .fold(C::Field::zero(), |a, (_, _, d)| a + d.clone());
        cut_value(g, shore) >= C::from_field(demand)
    })
}

fn d_between<C: Capacity>(g: &Graph<C>, a: u64, b: u64) -> C {
    g.edges()
        .iter()
        .filter(|e| (a >> e.u & 1 == 1 && b >> e.v & 1 == 1) || (a >> e.v & 1 == 1 && b >> e.u & 1 == 1))
        .fold(C::zero(), |acc, e| acc + e.capacity.clone())
}

fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::new();
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

// ---- criteria ------------------------------------------------------------

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_gh_oracle() -> Check {
    let mut pairs = 0;
    for i in 0..200u64 {
        let seed = derive_seed(ROOT_SEED, "c1", i);
        let mut r = rng(seed);
        let n = r.gen_range(2..=8);
        let g = gen_random_connected(n, r.gen_range(0.1..0.8), seed).map_err(|e| e.to_string())?;
        let g = perturb(&g).map_err(|e| e.to_string())?;
        let z: Vec<usize> = (0..n).collect();
        let t = build_gh_tree(&g, &z).map_err(|e| e.to_string())?;
        for a in 0..n {
            for b in a + 1..n {
                let tree = t.tree_lambda(a, b).map_err(|e| e.to_string())?;
                let (oracle, _, _) = oracle_min_cut(&g, a, b);
                ensure(tree == oracle, || format!("graph {i}: lambda({a},{b}) {tree} vs {oracle}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("200 graphs, {pairs} pairs equal"))
}

fn c2_k23() -> Check {
    let g = k23();
    let z: Vec<usize> = (0..5).collect();
    let t = build_gh_tree(&g, &z).map_err(|e| e.to_string())?;
    let lam = |a, b| t.tree_lambda(a, b).unwrap();
    ensure(lam(U1, U2) == q(3, 1), || format!("lambda(u1,u2) = {}", lam(U1, U2)))?;
    for v in 2..5 {
        for x in (0..5).filter(|&x| x != v) {
            ensure(lam(v, x) == q(2, 1), || format!("lambda({v},{x}) = {}", lam(v, x)))?;
            ensure(oracle_min_cut(&g, v, x).0 == q(2, 1), || format!("oracle lambda({v},{x})"))?;
        }
    }
    ensure(oracle_min_cut(&g, U1, U2).0 == q(3, 1), || "oracle lambda(u1,u2)".into())?;

    let mut subtrees = 0;
    let mut encoding = 0;
    for code in 0..125usize {
        let seq = [code / 25, code / 5 % 5, code % 5];
        let edges = prufer_decode(&seq, 5);
        if !edges.iter().all(|&(a, b)| g.find_edge(a, b).is_some()) {
            continue;
        }
        subtrees += 1;
        // the only capacity an encoding edge can carry is lambda of its ends
        let all_encoding = edges.iter().all(|&(a, b)| {
            let mut side = 1u64 << a;
            let mut grew = true;
            while grew {
                grew = false;
                for &(x, y) in &edges {
                    if (x, y) == (a, b) {
                        continue;
                    }
                    for (p, r) in [(x, y), (y, x)] {
                        if side >> p & 1 == 1 && side >> r & 1 == 0 {
                            side |= 1 << r;
                            grew = true;
                        }
                    }
                }
            }
            cut_value(&g, side) == oracle_min_cut(&g, a, b).0
        });
        if all_encoding {
            encoding += 1;
        }
    }
    ensure(subtrees == 12, || format!("{subtrees} spanning trees of K23 found, expected 12"))?;
    ensure(encoding == 0, || format!("{encoding} spanning trees are Gomory-Hu trees"))?;
    let sub = is_gh_subgraph(&g, &t).map_err(|e| e.to_string())?;
    ensure(sub.is_none(), || "built tree is a subgraph".into())?;
    Ok("lambda values exact; 0 of 12 spanning subtrees (125 labelled trees) encode".into())
}

fn c3_k33() -> Check {
    let g = k33();
    let z: Vec<usize> = (0..6).collect();
    let t = build_gh_tree(&g, &z).map_err(|e| e.to_string())?;
    let center = t.star_center().ok_or("not a star")?;
    ensure(t.tree_degree(center) == 5, || "center degree is not 5".into())?;
    let grid = grid_denominator(&g);
    for e in &t.edges {
        ensure(e.capacity == q(3, 1), || format!("edge {}-{} has {}", e.a, e.b, e.capacity))?;
        let back = deperturb(&e.perturbed_capacity, &grid);
        ensure(back == q(3, 1), || format!("edge {}-{} de-perturbs to {back}", e.a, e.b))?;
    }
    Ok(format!("5-star centred at {center}, all edges 3"))
}

fn c4_subgraph_theorem() -> Check {
    let mut checked = 0;
    for i in 0..100u64 {
        let seed = derive_seed(ROOT_SEED, "c4", i);
        let mut r = rng(seed);
        let specs = random_block_specs(&mut r);
        let host = gen_onesum(&specs, seed).map_err(|e| e.to_string())?;
        ensure(host.n() <= 12, || format!("host {i} has {} vertices", host.n()))?;
        for j in 0..3 {
            let g = gen_subgraph(&host, r.gen_range(0.5..1.0), derive_seed(seed, "sub", j)).map_err(|e| e.to_string())?;
            let z: Vec<usize> = (0..g.n()).collect();
            let t = build_gh_tree(&g, &z).map_err(|e| e.to_string())?;
            let w = is_gh_subgraph(&g, &t).map_err(|e| e.to_string())?;
            ensure(w.is_some(), || format!("one-sum {i} subgraph {j}: tree is not a subgraph"))?;
            let a = r.gen_range(0..g.n());
            let b = (a + 1 + r.gen_range(0..g.n() - 1)) % g.n();
            ensure(t.tree_lambda(a, b).unwrap() == oracle_min_cut(&g, a, b).0, || {
                format!("one-sum {i} subgraph {j}: wrong lambda")
            })?;
            checked += 1;
        }
    }
    for i in 0..20u64 {
        let seed = derive_seed(ROOT_SEED, "c4-neg", i);
        let host = gen_k23_host((i % 4) as usize, seed).map_err(|e| e.to_string())?;
        let z = host.terminals().to_vec();
        let emb = detect_terminal_minor(&host, &z, &MinorPattern::k23(), 20)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("host {i}: no K23 found"))?;
        let adv = gen_adversarial_from_minor(&host, &z, &emb).map_err(|e| e.to_string())?;
        let g = all_terminals(&adv.graph);
        let zs: Vec<usize> = (0..g.n()).collect();
        let t = build_gh_tree(&g, &zs).map_err(|e| e.to_string())?;
        let w = is_gh_subgraph(&g, &t).map_err(|e| e.to_string())?;
        ensure(w.is_none(), || format!("K23 host {i}: adversarial tree is a subgraph"))?;
    }
    Ok(format!("{checked} subgraphs embed; 20 adversarial hosts defeat it"))
}

fn web_spec(r: &mut impl Rng, max_n: usize) -> ZWebSpec {
    let k = r.gen_range(5..=7);
    let mut spec = ZWebSpec::plain(k);
    spec.interior = r.gen_range(0..=3);
    if r.gen_bool(0.2) {
        spec.triangulation = Triangulation::Fan;
    }
    let faces = k - 2 + 2 * spec.interior;
    while spec.attachments.len() < faces.min(3) && r.gen_bool(0.6) {
        let size = r.gen_range(1..=4);
        if spec.vertex_count() + size > max_n {
            break;
        }
        spec.attachments.push(size);
    }
    if r.gen_bool(0.5) {
        spec.subgraph = SubgraphPass::Biconnected;
    }
    spec
}

fn c5_bag_minor_theorem() -> Check {
    let mut largest = 0;
    for i in 0..100u64 {
        let seed = derive_seed(ROOT_SEED, "c5", i);
        let mut r = rng(seed);
        let spec = web_spec(&mut r, 16);
        let w = gen_zweb(&spec, seed).map_err(|e| e.to_string())?;
        let g = perturb(&w.graph).map_err(|e| e.to_string())?;
        ensure(g.n() <= 16 && g.is_biconnected(), || format!("web {i} out of range"))?;
        largest = largest.max(g.n());
        let z = g.terminals().to_vec();
        let k23 = detect_terminal_minor(&g, &z, &MinorPattern::k23(), 20).map_err(|e| e.to_string())?;
        ensure(k23.is_none(), || format!("web {i} has a terminal K23"))?;
        let t = build_gh_tree(&g, &z).map_err(|e| e.to_string())?;
        let w = check_bag_minor(&g, &t).map_err(|e| e.to_string())?;
        let w = w.ok_or_else(|| format!("web {i}: tree is not a bag minor"))?;
        ensure(w.recheck(&g, &t, &Default::default()), || format!("web {i}: witness fails"))?;
    }
    for i in 0..20u64 {
        let seed = derive_seed(ROOT_SEED, "c5-neg", i);
        let host = gen_k23_host((i % 4) as usize, seed).map_err(|e| e.to_string())?;
        let z = host.terminals().to_vec();
        let emb = detect_terminal_minor(&host, &z, &MinorPattern::k23(), 20)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("host {i}: no K23 found"))?;
        let adv = gen_adversarial_from_minor(&host, &z, &emb).map_err(|e| e.to_string())?;
        let az = adv.graph.terminals().to_vec();
        let t = build_gh_tree(&adv.graph, &az).map_err(|e| e.to_string())?;
        let weak = check_weak_bag_minor(&adv.graph, &t, 12).map_err(|e| e.to_string())?;
        ensure(weak.is_none(), || format!("adversarial {i}: weak bag minor exists"))?;
    }
    Ok(format!("100 webs (up to {largest} vertices) K23-free with bag minors; 20 adversarial"))
}

fn c6_star_reduction() -> Check {
    for i in 0..100u64 {
        let seed = derive_seed(ROOT_SEED, "c6", i);
        let mut r = rng(seed);
        let k = r.gen_range(3..=7);
        let spec = ZWebSpec {
            interior: r.gen_range(0..=2),
            attachments: vec![r.gen_range(1..=6)],
            ..ZWebSpec::plain(k)
        };
        let w = gen_zweb(&spec, seed).map_err(|e| e.to_string())?;
        ensure(w.separated.len() == 1 && w.separated[0].interior.len() <= 6, || {
            format!("instance {i}: bad attachment")
        })?;
        let z: Vec<usize> = (0..k).collect();
        let red = reduce_all(&w.graph, &w.separated).map_err(|e| e.to_string())?;
        let before = lambda_matrix(&w.graph, &z).map_err(|e| e.to_string())?;
        let after = lambda_matrix(&red, &z).map_err(|e| e.to_string())?;
        ensure(before == after, || format!("instance {i}: lambda changed"))?;
        let ob = oracle_terminal_cuts(&w.graph, &z);
        let oa = oracle_terminal_cuts(&red, &z);
        ensure(ob == oa, || format!("instance {i}: terminal cuts changed"))?;
        for a in 0..k {
            for b in a + 1..k {
                ensure(before.get(a, b) == Some(&oracle_lambda(&ob, a, b)), || {
                    format!("instance {i}: lambda({a},{b}) disagrees with the oracle")
                })?;
            }
        }
    }
    Ok("100 reductions preserve every terminal cut".into())
}

fn c7_gap() -> Check {
    let g = k23();
    let z: Vec<usize> = (0..5).collect();
    let emb = detect_terminal_minor(&g, &z, &MinorPattern::k23(), 20)
        .map_err(|e| e.to_string())?
        .ok_or("no K23 in K23")?;
    let adv = gen_adversarial_from_minor(&g, &z, &emb).map_err(|e| e.to_string())?;
    let inst = &adv.instance;
    ensure(oracle_cut_condition(inst), || "cut condition fails".into())?;
    let lambda = max_concurrent_flow(inst).map_err(|e| e.to_string())?;
    ensure(lambda == q(3, 4), || format!("concurrent flow {lambda}"))?;
    let gap = flow_cut_gap(inst, 18).map_err(|e| e.to_string())?;
    ensure(gap.min_cut_ratio == q(1, 1), || format!("min cut ratio {}", gap.min_cut_ratio))?;
    ensure(gap.gap == q(4, 3), || format!("gap {}", gap.gap))?;
    ensure(feasible(&inst.scaled(&q(3, 4))).unwrap().is_feasible(), || "3/4 not routable".into())?;
    ensure(!feasible(&inst.scaled(&q(76, 100))).unwrap().is_feasible(), || "0.76 routable".into())?;
    Ok("cut condition holds, lambda* = 3/4, gap = 4/3".into())
}

fn c8_cut_sufficiency() -> Check {
    let (mut yes, mut no) = (0, 0);
    for i in 0..100u64 {
        let seed = derive_seed(ROOT_SEED, "c8", i);
        let mut r = rng(seed);
        let spec = web_spec(&mut r, 10);
        let w = gen_zweb(&spec, seed).map_err(|e| e.to_string())?;
        let k = spec.k;
        let count = r.gen_range(2..=5);
        let demands: Vec<(usize, usize, Rational)> = (0..count)
            .map(|_| {
                let a = r.gen_range(0..k);
                let b = (a + 1 + r.gen_range(0..k - 1)) % k;
                (a, b, random_capacity(&mut r, 6, 3))
            })
            .collect();
        let base = MultiflowInstance::new(w.graph.clone(), demands).map_err(|e| e.to_string())?;
        let ratio = flow_cut_gap(&base, 18).map_err(|e| e.to_string())?.min_cut_ratio;
        let scales = [q(1, 1), ratio.clone(), ratio * q(21, 20)];
        for (j, s) in scales.iter().enumerate() {
            let inst = base.scaled(s);
            let cut = oracle_cut_condition(&inst);
            let cert = feasible(&inst).map_err(|e| e.to_string())?;
            ensure(cut == cert.is_feasible(), || {
                format!("web {i} scale {j}: cut condition {cut}, feasible {}", cert.is_feasible())
            })?;
            if let FeasibilityCert::Feasible { commodities } = &cert {
                ensure(check_flows(&inst, commodities), || format!("web {i} scale {j}: flow does not check"))?;
                yes += 1;
            } else {
                no += 1;
            }
        }
    }
    Ok(format!("300 instances agree ({yes} feasible, {no} infeasible)"))
}

fn c9_middle_lemma() -> Check {
    let mut configs = 0u64;
    for i in 0..200u64 {
        let seed = derive_seed(ROOT_SEED, "c9", i);
        let mut r = rng(seed);
        let n = r.gen_range(3..=8);
        let g = gen_random_connected(n, r.gen_range(0.1..0.8), seed).map_err(|e| e.to_string())?;
        let g = perturb(&g).map_err(|e| e.to_string())?;
        let all = (1u64 << n) - 1;
        for t in 0..n {
            let mut shores: Vec<u64> = Vec::new();
            for x in (0..n).filter(|&x| x != t) {
                let (_, shore, count) = oracle_min_cut(&g, x, t);
                ensure(count == 1, || format!("graph {i}: min {x}-{t} cut not unique"))?;
                if !shores.contains(&shore) {
                    shores.push(shore);
                }
            }
            for &xs in &shores {
                for &ys in &shores {
                    if xs & ys != 0 {
                        continue;
                    }
                    let free = all & !xs & !ys & !(1 << t);
                    // every nonempty submask of the free vertices
                    let mut m = free;
                    while m != 0 {
                        let rest = all & !xs & !ys & !m;
                        let d = d_between(&g, m, rest);
                        ensure(d > Rational::zero(), || {
                            format!("graph {i}: t={t} X={xs:b} Y={ys:b} M={m:b} has d = {d}")
                        })?;
                        configs += 1;
                        m = (m - 1) & free;
                    }
                }
            }
        }
    }
    Ok(format!("{configs} configurations, all positive"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 gh-oracle", Duration::from_secs(60), c1_gh_oracle),
        ("2 k23-fixtures", Duration::from_secs(5), c2_k23),
        ("3 k33-star", Duration::from_secs(1), c3_k33),
        ("4 subgraph-theorem", Duration::from_secs(300), c4_subgraph_theorem),
        ("5 bag-minor-theorem", Duration::from_secs(600), c5_bag_minor_theorem),
        ("6 star-reduction", Duration::from_secs(120), c6_star_reduction),
        ("7 flow-cut-gap", Duration::from_secs(5), c7_gap),
        ("8 cut-sufficiency", Duration::from_secs(600), c8_cut_sufficiency),
        ("9 middle-lemma", Duration::from_secs(120), c9_middle_lemma),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {name:<22} {} {:>8.2}s / {:>4}s  {detail}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
