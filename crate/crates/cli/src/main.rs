use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use ghminor::embedding::{check_bag_minor, check_weak_bag_minor, is_gh_subgraph, BagMinorWitness};
use ghminor::gomory_hu::{build_gh_tree, GomoryHuTree};
use ghminor::instances::{
    gen_adversarial_from_minor, gen_k23_host, gen_onesum, gen_outerplanar, gen_zweb, reduce_all, BlockSpec,
    SubgraphPass, Triangulation, ZWebSpec,
};
use ghminor::io::{graph_dot, parse_document, tree_dot, write_document, write_tree, Document, DotStyle};
use ghminor::minors::{detect_terminal_minor, MinorEmbedding, MinorPattern};
use ghminor::multiflow::{feasible, max_concurrent_flow, scan_cuts, CutCondition, MultiflowInstance};
use ghminor::suite::{run_suite, Fault, Suite, SuiteBounds, SuiteConfig};
use ghminor::{Graph, TieredRational};

const EXIT_OK: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 3;

type G = Graph<TieredRational>;

#[derive(Parser, Debug)]
#[command(name = "ghz", version, about = "Gomory-Hu trees, terminal minors and cut-sufficiency checks")]
struct Cli {
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Vertex bound for every exhaustive search and enumeration.
    #[arg(long, global = true)]
    bound_n: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Shorthand for `--format dot`.
    #[arg(long, global = true)]
    dot: bool,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EmbedMode {
    Subgraph,
    Bag,
    Weak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Outerplanar,
    Onesum,
    Zweb,
    Adversarial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PassArg {
    Off,
    Connected,
    Biconnected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FaultArg {
    SkipPerturbation,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a Gomory-Hu tree on the graph's terminals.
    Ghtree { input: PathBuf },
    /// Decide how the Gomory-Hu tree embeds in the graph.
    VerifyEmbed {
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: EmbedMode,
    },
    /// Search for a terminal minor; prints one branch set per line.
    DetectMinor {
        input: PathBuf,
        /// k23, k4, k4plus or cycle:<k>
        #[arg(long)]
        pattern: MinorPattern,
    },
    /// Generate an instance.
    Gen {
        #[arg(value_enum)]
        family: Family,
        /// Vertex count (outerplanar).
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Comma-separated blocks for onesum, e.g. `o5,k4,o3`.
        #[arg(long, default_value = "o5,k4")]
        blocks: String,
        /// Outer-cycle terminals (zweb).
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        interior: usize,
        /// Comma-separated clique sizes of the attachments (zweb).
        #[arg(long, default_value = "")]
        attach: String,
        #[arg(long)]
        fan: bool,
        #[arg(long, value_enum, default_value_t = PassArg::Off)]
        subgraph: PassArg,
        /// Extra vertices hung off the K23 host (adversarial).
        #[arg(long, default_value_t = 0)]
        extra: usize,
    },
    /// Replace every declared 3-separated set by a star.
    Reduce { input: PathBuf },
    /// Cut condition, feasibility, concurrent flow and flow-cut gap.
    Flowcheck { input: PathBuf },
    /// Run seeded property suites.
    Suite {
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Comma-separated subset of gh-oracle,thm1,thm2,minors,reduction,flows.
        #[arg(long, default_value = "gh-oracle,thm1,thm2,minors,reduction,flows")]
        suites: String,
        #[arg(long, value_enum)]
        fault: Option<FaultArg>,
    },
    /// DOT drawing of a graph, optionally with Gomory-Hu bags or a minor.
    Dot {
        input: PathBuf,
        /// Draw the bags of the Gomory-Hu tree as clusters.
        #[arg(long)]
        bags: bool,
        /// Draw the branch sets of this minor as clusters.
        #[arg(long)]
        pattern: Option<MinorPattern>,
    },
}

struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn new(text: String, code: u8) -> Self {
        Self { text, code }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out.text) {
                eprintln!("error: {e:#}");
                return ExitCode::from(EXIT_USAGE);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let inconclusive = e
                .downcast_ref::<ghminor::Error>()
                .is_some_and(ghminor::Error::is_inconclusive);
            ExitCode::from(if inconclusive { EXIT_INCONCLUSIVE } else { EXIT_USAGE })
        }
    }
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read_input(path: &PathBuf) -> anyhow::Result<Document<TieredRational>> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(parse_document(&text)?)
}

fn bounds(cli: &Cli) -> SuiteBounds {
    match cli.bound_n {
        Some(b) => SuiteBounds {
            oracle: b,
            minor: b,
            weak: b,
            cut: b,
        },
        None => SuiteBounds::default(),
    }
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    let dot = cli.dot || cli.format == Format::Dot;
    match &cli.command {
        Command::Ghtree { input } => {
            let g = read_input(input)?.graph;
            let t = build_gh_tree(&g, g.terminals())?;
            Ok(Output::new(if dot { tree_dot(&t) } else { write_tree(&t) }, EXIT_OK))
        }
        Command::VerifyEmbed { input, mode } => verify_embed(cli, &read_input(input)?.graph, *mode),
        Command::DetectMinor { input, pattern } => {
            let g = read_input(input)?.graph;
            let z = g.terminals().to_vec();
            let found = detect_terminal_minor(&g, &z, pattern, bounds(cli).minor)?;
            let text = match (&found, dot) {
                (Some(emb), true) => graph_dot(&g, &minor_style(&g, pattern, emb)),
                (None, true) => graph_dot(&g, &DotStyle::default()),
                (Some(emb), false) => emb
                    .branch_sets
                    .iter()
                    .enumerate()
                    .map(|(i, s)| format!("{i}: {}\n", join(s.iter())))
                    .collect(),
                (None, false) => format!("no terminal {pattern} minor\n"),
            };
            Ok(Output::new(text, if found.is_some() { EXIT_OK } else { EXIT_NO }))
        }
        Command::Gen {
            family,
            n,
            blocks,
            k,
            interior,
            attach,
            fan,
            subgraph,
            extra,
        } => {
            let doc = generate(cli.seed, *family, *n, blocks, *k, *interior, attach, *fan, *subgraph, *extra)?;
            let text = if dot {
                graph_dot(&doc.graph, &DotStyle::default())
            } else {
                write_document(&doc)
            };
            Ok(Output::new(text, EXIT_OK))
        }
        Command::Reduce { input } => {
            let doc = read_input(input)?;
            let graph = reduce_all(&doc.graph, &doc.separated)?;
            let out = Document {
                graph,
                demands: doc.demands,
                separated: Vec::new(),
            };
            let text = if dot {
                graph_dot(&out.graph, &DotStyle::default())
            } else {
                write_document(&out)
            };
            Ok(Output::new(text, EXIT_OK))
        }
        Command::Flowcheck { input } => flowcheck(cli, read_input(input)?),
        Command::Suite { trials, suites, fault } => {
            let suites = suites
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse::<Suite>())
                .collect::<Result<Vec<_>, _>>()?;
            let cfg = SuiteConfig {
                seed: cli.seed,
                trials: *trials,
                bounds: bounds(cli),
                suites,
                fault: fault.map(|FaultArg::SkipPerturbation| Fault::SkipPerturbation),
            };
            let report = run_suite(&cfg)?;
            let code = if report.any_failed() {
                EXIT_NO
            } else if !report.all_passed() {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            };
            Ok(Output::new(report.to_string(), code))
        }
        Command::Dot { input, bags, pattern } => {
            let g = read_input(input)?.graph;
            let mut style = DotStyle::default();
            if *bags {
                style = DotStyle::with_bags(&build_gh_tree(&g, g.terminals())?);
            }
            if let Some(p) = pattern {
                let z = g.terminals().to_vec();
                if let Some(emb) = detect_terminal_minor(&g, &z, p, bounds(cli).minor)? {
                    let m = minor_style(&g, p, &emb);
                    style.clusters.extend(m.clusters);
                    style.highlight.extend(m.highlight);
                }
            }
            Ok(Output::new(graph_dot(&g, &style), EXIT_OK))
        }
    }
}

fn join(items: impl Iterator<Item = usize>) -> String {
    items.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn minor_style(g: &G, p: &MinorPattern, emb: &MinorEmbedding) -> DotStyle {
    let mut style = DotStyle::default();
    for (i, set) in emb.branch_sets.iter().enumerate() {
        style.clusters.push((format!("{p} vertex {i}"), set.clone()));
    }
    let owner = |v: usize| emb.branch_sets.iter().position(|s| s.contains(v));
    for &(a, b) in &p.edges {
        if let Some(e) = g
            .edges()
            .iter()
            .find(|e| (owner(e.u), owner(e.v)) == (Some(a), Some(b)) || (owner(e.u), owner(e.v)) == (Some(b), Some(a)))
        {
            style.highlight.insert(e.id);
        }
    }
    for e in g.edges() {
        if owner(e.u).is_some() && owner(e.u) == owner(e.v) {
            style.highlight.insert(e.id);
        }
    }
    style
}

fn bag_witness_text(t: &GomoryHuTree<TieredRational>, g: &G, w: &BagMinorWitness) -> String {
    let mut out = String::new();
    for (e, &id) in t.edges.iter().zip(&w.connecting) {
        let ge = g.edge(id);
        out.push_str(&format!("tree {}-{} via {}-{}\n", e.a, e.b, ge.u, ge.v));
    }
    out
}

fn verify_embed(cli: &Cli, g: &G, mode: EmbedMode) -> anyhow::Result<Output> {
    let t = build_gh_tree(g, g.terminals())?;
    let mut style = DotStyle::with_bags(&t);
    let (holds, mut text) = match mode {
        EmbedMode::Subgraph => match is_gh_subgraph(g, &t)? {
            Some(w) => {
                style.highlight.extend(w.edge_map.iter().copied());
                (true, String::new())
            }
            None => (false, String::new()),
        },
        EmbedMode::Bag => match check_bag_minor(g, &t)? {
            Some(w) => {
                style.highlight.extend(w.connecting.iter().copied());
                (true, bag_witness_text(&t, g, &w))
            }
            None => (false, String::new()),
        },
        EmbedMode::Weak => match check_weak_bag_minor(g, &t, bounds(cli).weak)? {
            Some(w) => {
                style.highlight.extend(w.bag_minor.connecting.iter().copied());
                let mut s = format!("deleted: {}\n", join(w.deleted.iter()));
                s.push_str(&bag_witness_text(&t, g, &w.bag_minor));
                (true, s)
            }
            None => (false, String::new()),
        },
    };
    let code = if holds { EXIT_OK } else { EXIT_NO };
    if cli.dot || cli.format == Format::Dot {
        return Ok(Output::new(graph_dot(g, &style), code));
    }
    text.insert_str(0, &format!("holds: {}\n", if holds { "yes" } else { "no" }));
    Ok(Output::new(text, code))
}

#[allow(clippy::too_many_arguments)]
fn generate(
    seed: u64,
    family: Family,
    n: usize,
    blocks: &str,
    k: usize,
    interior: usize,
    attach: &str,
    fan: bool,
    subgraph: PassArg,
    extra: usize,
) -> anyhow::Result<Document<TieredRational>> {
    let lift = |g: ghminor::CapGraph| g.map_capacities(|e| TieredRational::finite(e.capacity.clone()));
    Ok(match family {
        Family::Outerplanar => Document::from_graph(lift(gen_outerplanar(n, seed)?)),
        Family::Onesum => {
            let specs = blocks
                .split(',')
                .map(|b| b.parse::<BlockSpec>())
                .collect::<Result<Vec<_>, _>>()?;
            Document::from_graph(lift(gen_onesum(&specs, seed)?))
        }
        Family::Zweb => {
            let attachments = attach
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse::<usize>().context("attachment sizes are integers"))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let spec = ZWebSpec {
                k,
                interior,
                triangulation: if fan { Triangulation::Fan } else { Triangulation::Random },
                attachments,
                subgraph: match subgraph {
                    PassArg::Off => SubgraphPass::Off,
                    PassArg::Connected => SubgraphPass::Connected,
                    PassArg::Biconnected => SubgraphPass::Biconnected,
                },
            };
            let w = gen_zweb(&spec, seed)?;
            Document {
                graph: lift(w.graph),
                demands: Vec::new(),
                separated: w.separated,
            }
        }
        Family::Adversarial => {
            let host = gen_k23_host(extra, seed)?;
            let z = host.terminals().to_vec();
            let Some(emb) = detect_terminal_minor(&host, &z, &MinorPattern::k23(), 64)? else {
                bail!("generated host has no terminal K23");
            };
            let adv = gen_adversarial_from_minor(&host, &z, &emb)?;
            Document {
                graph: adv.instance.supply,
                demands: adv.instance.demands,
                separated: Vec::new(),
            }
        }
    })
}

fn flowcheck(cli: &Cli, doc: Document<TieredRational>) -> anyhow::Result<Output> {
    let inst = MultiflowInstance::new(doc.graph, doc.demands)?;
    let bound = bounds(cli).cut;
    let scan = scan_cuts(&inst, bound)?;
    let cert = feasible(&inst)?;
    let mut out = String::new();
    match &scan.condition {
        CutCondition::Holds => out.push_str("cut_condition: holds\n"),
        CutCondition::Violated {
            shore,
            capacity,
            demand,
        } => {
            out.push_str("cut_condition: violated\n");
            out.push_str(&format!("violated_shore: {}\n", join(shore.iter())));
            out.push_str(&format!("violated_capacity: {capacity}\n"));
            out.push_str(&format!("violated_demand: {demand}\n"));
        }
    }
    out.push_str(&format!("feasible: {}\n", cert.is_feasible()));
    if let Some(r) = &scan.min_ratio {
        out.push_str(&format!("min_cut_ratio: {r}\n"));
    }
    if let Some(s) = &scan.min_ratio_shore {
        out.push_str(&format!("min_cut_shore: {}\n", join(s.iter())));
    }
    if !inst.demands.is_empty() {
        match max_concurrent_flow(&inst) {
            Ok(lambda) => {
                out.push_str(&format!("max_concurrent_flow: {lambda}\n"));
                if let Some(r) = &scan.min_ratio {
                    out.push_str(&format!("flow_cut_gap: {}\n", r.clone() / lambda));
                }
            }
            Err(_) => out.push_str("max_concurrent_flow: unbounded\n"),
        }
    }
    let code = if cert.is_feasible() { EXIT_OK } else { EXIT_NO };
    Ok(Output::new(out, code))
}
