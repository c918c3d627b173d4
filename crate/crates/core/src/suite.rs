//! Seeded property suites over generated instances.
//!
//! Every trial derives its own seed from the root seed, the suite name and
//! the trial index, so any single failure can be replayed in isolation.
//! A failing trial carries its instance in the text format.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::embedding::{check_bag_minor, check_weak_bag_minor, is_gh_subgraph};
use crate::error::{Error, Result};
use crate::gomory_hu::{build_gh_tree_with, verify_encoding, GhOptions};
use crate::instances::{
    all_terminals, gen_adversarial_from_minor, gen_k23_host, gen_onesum, gen_random_connected, gen_subgraph,
    gen_zweb, reduce_all, BlockSpec, SubgraphPass, Triangulation, ZWeb, ZWebSpec,
};
use crate::io::{write_document, write_graph, Document};
use crate::mincut::{brute_min_cut, brute_min_cut_with_count, brute_terminal_cuts};
use crate::minors::{detect_terminal_minor, implied_minor_checks, verify_embedding, MinorPattern};
use crate::multiflow::{feasible, scan_cuts, MultiflowInstance};
use crate::perturb::perturb;
use crate::rng::{derive_seed, rng, DetRng};
use crate::scalar::{Capacity, Scalar};
use crate::{CapGraph, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    GhOracle,
    Thm1,
    Thm2,
    Minors,
    Reduction,
    Flows,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::GhOracle,
        Suite::Thm1,
        Suite::Thm2,
        Suite::Minors,
        Suite::Reduction,
        Suite::Flows,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::GhOracle => "gh-oracle",
            Suite::Thm1 => "thm1",
            Suite::Thm2 => "thm2",
            Suite::Minors => "minors",
            Suite::Reduction => "reduction",
            Suite::Flows => "flows",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite `{s}`")))
    }
}

/// Deliberate bugs for checking that the suites notice them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Build Gomory-Hu trees on the raw capacities.
    SkipPerturbation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteBounds {
    /// Vertex limit for subset-enumeration cut oracles.
    pub oracle: usize,
    /// Vertex limit for minor search.
    pub minor: usize,
    /// Non-terminal limit for the weak bag-minor search.
    pub weak: usize,
    /// Vertex limit for the cut-condition scan.
    pub cut: usize,
}

impl Default for SuiteBounds {
    fn default() -> Self {
        Self {
            oracle: crate::mincut::DEFAULT_ORACLE_BOUND,
            minor: crate::minors::DEFAULT_MINOR_BOUND,
            weak: crate::embedding::DEFAULT_WEAK_BOUND,
            cut: crate::multiflow::DEFAULT_CUT_BOUND,
        }
    }
}

const MAX_BOUND: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub bounds: SuiteBounds,
    pub suites: Vec<Suite>,
    pub fault: Option<Fault>,
}

impl SuiteConfig {
    pub fn new(seed: u64, trials: usize, suites: Vec<Suite>) -> Self {
        Self {
            seed,
            trials,
            bounds: SuiteBounds::default(),
            suites,
            fault: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Invalid("trials must be at least 1".into()));
        }
        let b = &self.bounds;
        for (name, v) in [("oracle", b.oracle), ("minor", b.minor), ("weak", b.weak), ("cut", b.cut)] {
            if v == 0 || v > MAX_BOUND {
                return Err(Error::Invalid(format!("{name} bound must be in 1..={MAX_BOUND}")));
            }
        }
        Ok(())
    }

    fn gh_options(&self) -> GhOptions {
        GhOptions {
            perturb: self.fault != Some(Fault::SkipPerturbation),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub trial: usize,
    pub seed: u64,
    pub message: String,
    /// The offending instance in the text format.
    pub instance: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub suite: Suite,
    pub passed: usize,
    pub failed: usize,
    /// Trials that hit a search bound.
    pub inconclusive: usize,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub results: Vec<SuiteResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.failed == 0 && r.inconclusive == 0)
    }

    pub fn any_failed(&self) -> bool {
        self.results.iter().any(|r| r.failed > 0)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            let status = if r.failed > 0 {
                "FAIL"
            } else if r.inconclusive > 0 {
                "INCONCLUSIVE"
            } else {
                "PASS"
            };
            writeln!(
                f,
                "{:<10} {status:<12} passed={} failed={} inconclusive={}",
                r.suite.name(),
                r.passed,
                r.failed,
                r.inconclusive
            )?;
        }
        for r in &self.results {
            for c in &r.counterexamples {
                writeln!(f, "# counterexample: suite={} trial={} seed={}", r.suite, c.trial, c.seed)?;
                writeln!(f, "# {}", c.message)?;
                f.write_str(&c.instance)?;
            }
        }
        Ok(())
    }
}

enum Outcome {
    Pass,
    Fail { message: String, instance: String },
    Inconclusive,
}

fn fail(message: impl Into<String>, instance: String) -> Outcome {
    Outcome::Fail {
        message: message.into(),
        instance,
    }
}

/// Turns an error into an outcome: bound overruns are inconclusive, the
/// rest are failures on `instance`.
fn from_error(e: Error, instance: String) -> Outcome {
    if e.is_inconclusive() {
        Outcome::Inconclusive
    } else {
        fail(format!("error: {e}"), instance)
    }
}

macro_rules! tri {
    ($e:expr, $inst:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return from_error(err, $inst),
        }
    };
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let mut report = SuiteReport::default();
    for &suite in &cfg.suites {
        let mut result = SuiteResult {
            suite,
            passed: 0,
            failed: 0,
            inconclusive: 0,
            counterexamples: Vec::new(),
        };
        for trial in 0..cfg.trials {
            let seed = derive_seed(cfg.seed, suite.name(), trial as u64);
            let outcome = match suite {
                Suite::GhOracle => gh_oracle_trial(cfg, seed),
                Suite::Thm1 => subgraph_trial(cfg, seed),
                Suite::Thm2 => bag_minor_trial(cfg, seed),
                Suite::Minors => minors_trial(cfg, seed),
                Suite::Reduction => reduction_trial(cfg, seed),
                Suite::Flows => flows_trial(cfg, seed),
            };
            match outcome {
                Outcome::Pass => result.passed += 1,
                Outcome::Inconclusive => result.inconclusive += 1,
                Outcome::Fail { message, instance } => {
                    result.failed += 1;
                    result.counterexamples.push(Counterexample {
                        trial,
                        seed,
                        message,
                        instance,
                    });
                }
            }
        }
        report.results.push(result);
    }
    Ok(report)
}

fn gh_oracle_trial(cfg: &SuiteConfig, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let n = r.gen_range(3..=8);
    let density = r.gen_range(0.2..0.7);
    let g = tri!(gen_random_connected(n, density, seed), String::new());
    let text = write_graph(&g);
    let z: Vec<usize> = (0..n).collect();
    let t = tri!(build_gh_tree_with(&g, &z, cfg.gh_options()), text);
    for a in 0..n {
        for b in a + 1..n {
            let tree = tri!(t.tree_lambda(a, b), text);
            let cut = tri!(brute_min_cut(&g, a, b, cfg.bounds.oracle), text);
            if tree != cut.capacity {
                return fail(
                    format!("lambda({a},{b}): tree says {tree}, oracle says {}", cut.capacity),
                    text,
                );
            }
        }
    }
    let report = tri!(verify_encoding(&g, &t), text);
    if !report.all_pass() {
        return fail(format!("tree edges {:?} are not encoding", report.failures()), text);
    }
    Outcome::Pass
}

/// Random 1-sum of outerplanar and `K₄` blocks with at most 12 vertices.
pub fn random_block_specs(r: &mut DetRng) -> Vec<BlockSpec> {
    let mut specs = Vec::new();
    let mut n = 1;
    loop {
        let spec = if r.gen_bool(0.3) {
            BlockSpec::K4
        } else {
            BlockSpec::Outerplanar(r.gen_range(3..=6))
        };
        let size = match spec {
            BlockSpec::K4 => 4,
            BlockSpec::Outerplanar(k) => k,
        };
        if n + size - 1 > 12 {
            break;
        }
        n += size - 1;
        specs.push(spec);
        if r.gen_bool(0.25) {
            break;
        }
    }
    specs
}

/// Subgraphs of 1-sums of outerplanar and `K₄` blocks: the Gomory-Hu tree
/// is a subgraph.
fn subgraph_trial(cfg: &SuiteConfig, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let specs = random_block_specs(&mut r);
    let host = tri!(gen_onesum(&specs, seed), String::new());
    for i in 0..3 {
        let keep = r.gen_range(0.5..1.0);
        let g = tri!(gen_subgraph(&host, keep, derive_seed(seed, "subgraph", i)), write_graph(&host));
        let text = write_graph(&g);
        let z: Vec<usize> = (0..g.n()).collect();
        let t = tri!(build_gh_tree_with(&g, &z, cfg.gh_options()), text);
        if tri!(is_gh_subgraph(&g, &t), text).is_none() {
            return fail("Gomory-Hu tree is not a subgraph", text);
        }
    }
    Outcome::Pass
}

/// A random web spec with `k` terminals and at most `max_n` vertices.
pub fn random_web_spec(r: &mut DetRng, k: usize, max_n: usize) -> ZWebSpec {
    let mut spec = ZWebSpec::plain(k);
    spec.interior = r.gen_range(0..=2.min(max_n - k));
    spec.triangulation = if r.gen_bool(0.2) {
        Triangulation::Fan
    } else {
        Triangulation::Random
    };
    let faces = k - 2 + 2 * spec.interior;
    while spec.attachments.len() < faces && r.gen_bool(0.5) {
        let size = r.gen_range(1..=3);
        if spec.vertex_count() + size > max_n {
            break;
        }
        spec.attachments.push(size);
    }
    spec.subgraph = if r.gen_bool(0.5) {
        SubgraphPass::Biconnected
    } else {
        SubgraphPass::Off
    };
    spec
}

fn web_text(w: &ZWeb) -> String {
    write_document(&Document {
        graph: w.graph.clone(),
        demands: Vec::new(),
        separated: w.separated.clone(),
    })
}

/// Uniqueness of every fundamental cut on the graph the tree was built
/// from (the perturbed copy unless perturbation is skipped).
fn unique_fundamental_cuts(cfg: &SuiteConfig, g: &CapGraph) -> Result<Option<String>> {
    let z = g.terminals().to_vec();
    let t = build_gh_tree_with(g, &z, cfg.gh_options())?;
    let working = if cfg.gh_options().perturb { perturb(g)? } else { g.clone() };
    for e in &t.edges {
        let (_, count) = brute_min_cut_with_count(&working, e.a, e.b, cfg.bounds.oracle)?;
        if count != 1 {
            return Ok(Some(format!("tie: {count} minimum {}-{} cuts", e.a, e.b)));
        }
    }
    Ok(None)
}

/// `K₂,₃`-free webs have bag-minor trees; adversarial capacities on a
/// `K₂,₃` host defeat even the weak bag minor.
fn bag_minor_trial(cfg: &SuiteConfig, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let k = r.gen_range(5..=7);
    let spec = random_web_spec(&mut r, k, 12);
    let w = tri!(gen_zweb(&spec, seed), String::new());
    // small integer capacities, so that ties are everywhere
    let g = w.graph.map_capacities(|_| Rational::from_int(r.gen_range(1..=2)));
    let w = ZWeb { graph: g, ..w };
    let text = web_text(&w);
    let g = &w.graph;
    let z = g.terminals().to_vec();

    if let Some(msg) = tri!(unique_fundamental_cuts(cfg, g), text) {
        return fail(msg, text);
    }
    if tri!(detect_terminal_minor(g, &z, &MinorPattern::k23(), cfg.bounds.minor), text).is_some() {
        return fail("web has a terminal K23", text);
    }
    let t = tri!(build_gh_tree_with(g, &z, cfg.gh_options()), text);
    if tri!(check_bag_minor(g, &t), text).is_none() {
        return fail("terminal tree is not a bag minor", text);
    }

    let host = tri!(gen_k23_host(r.gen_range(0..=2), seed), String::new());
    let htext = write_graph(&host);
    let hz = host.terminals().to_vec();
    let Some(emb) = tri!(detect_terminal_minor(&host, &hz, &MinorPattern::k23(), cfg.bounds.minor), htext) else {
        return fail("K23 host without a terminal K23", htext);
    };
    let adv = tri!(gen_adversarial_from_minor(&host, &hz, &emb), htext);
    let atext = write_graph(&adv.graph);
    let az = adv.graph.terminals().to_vec();
    let at = tri!(build_gh_tree_with(&adv.graph, &az, cfg.gh_options()), atext);
    if tri!(check_weak_bag_minor(&adv.graph, &at, cfg.bounds.weak), atext).is_some() {
        return fail("adversarial capacities still give a weak bag minor", atext);
    }
    Outcome::Pass
}

fn minors_trial(cfg: &SuiteConfig, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let n = r.gen_range(5..=8);
    let g = tri!(gen_random_connected(n, r.gen_range(0.2..0.6), seed), String::new());
    let mut z: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.7)).collect();
    if z.len() < 4 {
        z = (0..n).collect();
    }
    let g = tri!(g.with_terminals(z.clone()), String::new());
    let text = write_graph(&g);
    let bound = cfg.bounds.minor;
    let patterns = [
        MinorPattern::k23(),
        MinorPattern::k4(),
        MinorPattern::k4_plus(),
        tri!(MinorPattern::cycle(z.len()), text),
    ];
    for p in &patterns {
        let found = tri!(detect_terminal_minor(&g, &z, p, bound), text);
        if let Some(emb) = &found {
            if !verify_embedding(&g, &z, p, emb) {
                return fail(format!("{p} embedding does not verify"), text);
            }
        }
        // deleting an edge cannot create a minor
        if let Some(e) = g.edges().get(r.gen_range(0..g.m())) {
            let id = e.id;
            let h = g.filter_edges(|f| f.id != id);
            let after = tri!(detect_terminal_minor(&h, &z, p, bound), text);
            if after.is_some() && found.is_none() {
                return fail(format!("{p} appears after deleting edge {id}"), text);
            }
        }
    }
    let k23 = tri!(detect_terminal_minor(&g, &z, &patterns[0], bound), text).is_some();
    let mut in_block = false;
    for block in g.blocks() {
        let (h, _) = g.block_contraction(&block);
        let hz = h.terminals().to_vec();
        if hz.len() >= 5 && tri!(detect_terminal_minor(&h, &hz, &patterns[0], bound), text).is_some() {
            in_block = true;
        }
    }
    if k23 != in_block {
        return fail(format!("K23 in graph: {k23}, in some block: {in_block}"), text);
    }
    let report = tri!(implied_minor_checks(&g, &z, bound), text);
    if let Some(v) = report.violations().first() {
        return fail(format!("{:?} violated on block {:?}: {}", v.claim, v.block, v.detail), text);
    }
    Outcome::Pass
}

fn reduction_trial(cfg: &SuiteConfig, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let k = r.gen_range(3..=6);
    let spec = ZWebSpec {
        interior: r.gen_range(0..=2),
        attachments: vec![r.gen_range(1..=4)],
        ..ZWebSpec::plain(k)
    };
    let w = tri!(gen_zweb(&spec, seed), String::new());
    let text = web_text(&w);
    let z: Vec<usize> = (0..k).collect();
    let red = tri!(reduce_all(&w.graph, &w.separated), text);
    let before = tri!(brute_terminal_cuts(&w.graph, &z, cfg.bounds.oracle), text);
    let after = tri!(brute_terminal_cuts(&red, &z, cfg.bounds.oracle), text);
    if before != after {
        let bad = before.iter().find(|(key, v)| after.get(key) != Some(v));
        return fail(format!("terminal cut changed by the reduction: {bad:?}"), text);
    }
    Outcome::Pass
}

/// Random demands on the terminals of `g`, each a random `p/q`.
pub fn random_demands(r: &mut DetRng, z: &[usize], count: usize) -> Vec<(usize, usize, Rational)> {
    (0..count)
        .map(|_| {
            let a = r.gen_range(0..z.len());
            let mut b = r.gen_range(0..z.len() - 1);
            if b >= a {
                b += 1;
            }
            (z[a], z[b], crate::rng::random_capacity(r, 6, 3))
        })
        .collect()
}

fn flows_instance_text<C: Capacity>(inst: &MultiflowInstance<C>) -> String {
    write_document(&Document {
        graph: inst.supply.clone(),
        demands: inst.demands.clone(),
        separated: Vec::new(),
    })
}

fn cut_sufficiency<C: Capacity>(inst: &MultiflowInstance<C>, bound: usize) -> Result<Option<String>> {
    let cut = scan_cuts(inst, bound)?.condition.holds();
    let flow = feasible(inst)?.is_feasible();
    Ok((cut != flow).then(|| format!("cut condition holds: {cut}, feasible: {flow}")))
}

/// On webs the cut condition decides feasibility, including at the exact
/// tightness threshold; adversarial `K₂,₃` instances break it.
fn flows_trial(cfg: &SuiteConfig, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let k = r.gen_range(4..=6);
    let spec = random_web_spec(&mut r, k, 9);
    let w = tri!(gen_zweb(&spec, seed), String::new());
    let z: Vec<usize> = (0..k).collect();
    let count = r.gen_range(2..=4);
    let demands = random_demands(&mut r, &z, count);
    let inst = tri!(MultiflowInstance::new(w.graph.clone(), demands), web_text(&w));
    let scan = tri!(scan_cuts(&inst, cfg.bounds.cut), flows_instance_text(&inst));
    let Some(ratio) = scan.min_ratio else {
        return fail("demands cross no cut", flows_instance_text(&inst));
    };
    let tight = inst.scaled(&ratio);
    let over = inst.scaled(&(ratio * Rational::from_ratio(11, 10)));
    for candidate in [&inst, &tight, &over] {
        let text = flows_instance_text(candidate);
        if let Some(msg) = tri!(cut_sufficiency(candidate, cfg.bounds.cut), text) {
            return fail(msg, text);
        }
    }

    let host = tri!(gen_k23_host(r.gen_range(0..=2), seed), String::new());
    let host = all_terminals(&host);
    let hz = host.terminals().to_vec();
    let htext = write_graph(&host);
    let Some(emb) = tri!(detect_terminal_minor(&host, &hz, &MinorPattern::k23(), cfg.bounds.minor), htext) else {
        return fail("K23 host without a terminal K23", htext);
    };
    let adv = tri!(gen_adversarial_from_minor(&host, &hz, &emb), htext);
    let text = flows_instance_text(&adv.instance);
    let cut = tri!(scan_cuts(&adv.instance, cfg.bounds.cut), text).condition.holds();
    let flow = tri!(feasible(&adv.instance), text).is_feasible();
    if !cut || flow {
        return fail(
            format!("adversarial instance: cut condition {cut}, feasible {flow}"),
            text,
        );
    }
    Outcome::Pass
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gh_oracle_smoke() {
        let cfg = SuiteConfig::new(1, 1, vec![Suite::GhOracle]);
        let report = run_suite(&cfg).unwrap();
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn every_suite_passes_a_few_trials() {
        let cfg = SuiteConfig::new(7, 3, Suite::ALL.to_vec());
        let report = run_suite(&cfg).unwrap();
        assert!(report.all_passed(), "{report}");
        assert_eq!(report.results.len(), 6);
    }

    #[test]
    fn skipped_perturbation_is_caught_as_a_tie() {
        let mut cfg = SuiteConfig::new(1, 5, vec![Suite::Thm2]);
        cfg.fault = Some(Fault::SkipPerturbation);
        let a = run_suite(&cfg).unwrap();
        let b = run_suite(&cfg).unwrap();
        assert!(a.any_failed());
        assert!(a.results[0].counterexamples[0].message.starts_with("tie"));
        assert_eq!(a, b);
    }

    #[test]
    fn counterexamples_reparse() {
        let mut cfg = SuiteConfig::new(1, 2, vec![Suite::Thm2]);
        cfg.fault = Some(Fault::SkipPerturbation);
        let report = run_suite(&cfg).unwrap();
        for c in &report.results[0].counterexamples {
            let doc = crate::io::parse_document::<Rational>(&c.instance).unwrap();
            let mut cfg = cfg.clone();
            cfg.trials = 1;
            assert!(unique_fundamental_cuts(&cfg, &doc.graph).unwrap().is_some());
        }
    }

    #[test]
    fn config_validation() {
        assert!(SuiteConfig::new(0, 0, vec![]).validate().is_err());
        let mut cfg = SuiteConfig::new(0, 1, vec![]);
        cfg.bounds.oracle = 99;
        assert!(cfg.validate().is_err());
        assert_eq!("flows".parse::<Suite>().unwrap(), Suite::Flows);
        assert!("thm9".parse::<Suite>().is_err());
    }
}
