mod table;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use matchcount::acceptance::{run_suite, SUITES};
use matchcount::blossoms::{enumerate_blossoms, minimum_blossom};
use matchcount::count::{
    count_perfect, hole_pattern_table, ryser_permanent, BipartiteWeighted, CountEstimate, PermanentValue,
    DEFAULT_RYSER_CAP,
};
use matchcount::experiment::{broder_perfect_mass, torpid_experiment, Cut, Family, Weights};
use matchcount::gadgets::{
    blossom_reduction, chain_of_boxes, counterexample_graph, torpid_gadget, Digraph, GadgetGraph, PairGadget,
};
use matchcount::io::{parse_digraph, parse_edge_list, write_edge_list};
use matchcount::matching::holes;
use matchcount::mcmc::{build_chain_model, simulate, ChainKind, HoleWeightFn, DEFAULT_STATE_CAP};
use matchcount::recursive::{fpt_count, recursive_count, PermanentBackend, PivotStrategy};
use matchcount::structure::{fc_order, gallai_edmonds, maximum_matching};
use matchcount::{Graph, HolePattern, Matching, VertexId};

use table::{big, Format, Table};

#[derive(Parser, Debug)]
#[command(name = "matchcount", version, about = "Perfect matching counting, structure and chains")]
struct Cli {
    /// Graph in edge-list format; standard input when absent.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Destination; standard output when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for stochastic commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a constructed graph in edge-list format.
    Gadget(GadgetArgs),
    /// Count perfect matchings.
    Count(CountArgs),
    /// Perfect and near-perfect matching counts per hole pattern.
    HolesTable,
    /// Gallai-Edmonds partition with factor-critical orders.
    Decompose,
    /// Order and ear decomposition of a factor-critical graph.
    FcOrder,
    /// Blossoms through a hole of a matching.
    Blossoms(BlossomArgs),
    #[command(subcommand)]
    Chain(ChainCommand),
    #[command(subcommand)]
    Experiment(ExperimentCommand),
    /// Run an acceptance suite (or `all`).
    Accept { suite: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GadgetKind {
    Boxes,
    Torpid,
    Counterexample,
    Reduction,
}

#[derive(Args, Debug)]
struct GadgetArgs {
    #[arg(value_enum)]
    kind: GadgetKind,
    /// Size parameter; the number of boxes per pair for `reduction`.
    #[arg(long)]
    k: usize,
    /// Reduction only: digraph file (`d n m` header); a single arc 0->1 when absent.
    #[arg(long)]
    digraph: Option<PathBuf>,
    /// Reduction only: source vertex of the digraph.
    #[arg(long, default_value_t = 0)]
    s: usize,
    /// Reduction only: target vertex; the last vertex when absent.
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, value_enum, default_value_t = PairArg::Boxes)]
    pair: PairArg,
    /// Reduction only: also write the reduction's matching, one pair per line.
    #[arg(long)]
    matching_output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PairArg {
    Boxes,
    Doubling,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Brute,
    Ryser,
    Recursive,
    Fpt,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BackendArg {
    Enum,
    Ryser,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long, value_enum, default_value_t = Mode::Brute)]
    mode: Mode,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// `first`, `balanced` or `named:FILE` (one label per line).
    #[arg(long, default_value = "balanced")]
    pivot: String,
    #[arg(long, value_enum, default_value_t = BackendArg::Enum)]
    backend: BackendArg,
    /// Largest permanent dimension accepted by Ryser's formula.
    #[arg(long, default_value_t = DEFAULT_RYSER_CAP)]
    ryser_cap: usize,
    /// Largest factor-critical order accepted by `fpt`.
    #[arg(long, default_value_t = 64)]
    k_max: usize,
}

#[derive(Args, Debug)]
struct BlossomArgs {
    /// Exposed vertex, by label or index.
    #[arg(long)]
    hole: String,
    /// Matching file with one `u v` pair per line; a maximum matching of
    /// `G - hole` when absent.
    #[arg(long)]
    matching: Option<PathBuf>,
    /// Only a shortest blossom.
    #[arg(long)]
    min: bool,
    #[arg(long, default_value_t = 10_000)]
    cap: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WeightArg {
    Broder,
    Jsv,
    File,
}

#[derive(Args, Debug)]
struct ChainOpts {
    #[arg(long, value_enum, default_value_t = WeightArg::Jsv)]
    weights: WeightArg,
    /// Weight file for `--weights file`: `perfect <w>` and `<u> <v> <w>` lines.
    #[arg(long)]
    weight_file: Option<PathBuf>,
    /// Largest state space built explicitly.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    cap: usize,
}

#[derive(Subcommand, Debug)]
enum ChainCommand {
    /// Exact conductance of hole-pattern cuts of the chain.
    Analyze {
        #[command(flatten)]
        chain: ChainOpts,
        /// `near:A:B` for one class; every realised class when absent.
        #[arg(long)]
        cut: Option<String>,
        /// Also compute the mixing time to this distance.
        #[arg(long)]
        mixing: Option<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: usize,
    },
    /// Simulate a trajectory from a maximum matching.
    Run {
        #[command(flatten)]
        chain: ChainOpts,
        #[arg(long)]
        steps: u64,
        /// Checkpoint interval; a tenth of the run when absent.
        #[arg(long)]
        every: Option<u64>,
        /// Emit final visit counts per hole pattern instead of checkpoints.
        #[arg(long)]
        occupancy: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Torpid,
    Counterexample,
}

#[derive(Subcommand, Debug)]
enum ExperimentCommand {
    /// Conductance of a fixed cut across family sizes.
    Torpid {
        #[arg(long, value_enum, default_value_t = FamilyArg::Torpid)]
        family: FamilyArg,
        #[arg(long, default_value_t = 1)]
        k_min: usize,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        /// `near:A:B` or `s:1,3`; `near:u:v` on the torpid family and `s:1,3`
        /// on the counterexample family when absent.
        #[arg(long)]
        cut: Option<String>,
        #[arg(long, value_enum, default_value_t = WeightArg::Jsv)]
        weights: WeightArg,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        cap: usize,
        /// Emit the Broder stationary mass of perfect matchings instead.
        #[arg(long)]
        perfect_mass: bool,
    },
}

struct Io {
    input: Option<PathBuf>,
    output: Option<PathBuf>,
    format: Option<Format>,
}

impl Io {
    fn read_input(&self) -> Result<String> {
        match &self.input {
            Some(p) => read(p),
            None => {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s).context("reading standard input")?;
                Ok(s)
            }
        }
    }

    fn graph(&self) -> Result<Graph> {
        let text = self.read_input()?;
        parse_edge_list(&text).context("parsing the input graph")
    }

    fn sink(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.output {
            Some(p) => Box::new(io::BufWriter::new(
                fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
            )),
            None => Box::new(io::stdout().lock()),
        })
    }

    fn text(&self, s: &str) -> Result<()> {
        let mut out = self.sink()?;
        out.write_all(s.as_bytes())?;
        out.flush()?;
        Ok(())
    }

    fn table(&self, t: &Table, default: Format) -> Result<()> {
        let mut out = self.sink()?;
        t.write(self.format.unwrap_or(default), &mut out)?;
        out.flush()?;
        Ok(())
    }
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let io = Io {
        input: cli.input,
        output: cli.output,
        format: cli.format,
    };
    match cli.command {
        Command::Gadget(a) => gadget(&io, &a)?,
        Command::Count(a) => count(&io, &a)?,
        Command::HolesTable => holes_table(&io)?,
        Command::Decompose => decompose(&io)?,
        Command::FcOrder => fc_order_cmd(&io)?,
        Command::Blossoms(a) => blossoms(&io, &a)?,
        Command::Chain(ChainCommand::Analyze {
            chain,
            cut,
            mixing,
            max_steps,
        }) => chain_analyze(&io, &chain, cut.as_deref(), mixing, max_steps)?,
        Command::Chain(ChainCommand::Run {
            chain,
            steps,
            every,
            occupancy,
        }) => {
            let seed = cli.seed.ok_or_else(|| anyhow!("chain run needs --seed"))?;
            chain_run(&io, &chain, steps, every, seed, occupancy)?
        }
        Command::Experiment(ExperimentCommand::Torpid {
            family,
            k_min,
            k_max,
            cut,
            weights,
            cap,
            perfect_mass,
        }) => experiment(&io, family, k_min..=k_max, cut.as_deref(), weights, cap, perfect_mass)?,
        Command::Accept { suite } => return accept(&io, &suite),
    }
    Ok(ExitCode::SUCCESS)
}

/// Label of `v`, or its index when unlabelled.
fn name(g: &Graph, v: VertexId) -> String {
    g.label(v).map_or_else(|| v.index().to_string(), str::to_string)
}

fn names(g: &Graph, vs: &[VertexId]) -> Vec<String> {
    vs.iter().map(|&v| name(g, v)).collect()
}

/// A vertex by label, falling back to its index.
fn resolve(g: &Graph, s: &str) -> Result<VertexId> {
    if let Some(v) = g.find_label(s) {
        return Ok(v);
    }
    match s.parse::<usize>() {
        Ok(i) if g.contains(VertexId::from(i)) => Ok(VertexId::from(i)),
        _ => bail!("no vertex labelled or numbered {s:?}"),
    }
}

fn gadget(io: &Io, a: &GadgetArgs) -> Result<()> {
    let built: GadgetGraph = match a.kind {
        GadgetKind::Boxes => chain_of_boxes(a.k)?,
        GadgetKind::Torpid => torpid_gadget(a.k)?,
        GadgetKind::Counterexample => counterexample_graph(a.k)?,
        GadgetKind::Reduction => {
            let h = match &a.digraph {
                Some(p) => parse_digraph(&read(p)?).context("parsing the digraph")?,
                None => Digraph::new(2, vec![(0, 1)])?,
            };
            let t = a.t.unwrap_or(h.n.saturating_sub(1));
            let pair = match a.pair {
                PairArg::Boxes => PairGadget::Boxes,
                PairArg::Doubling => PairGadget::Doubling,
            };
            let red = blossom_reduction(&h, a.s, t, a.k, pair)?;
            if let Some(p) = &a.matching_output {
                let (_, ids) = write_edge_list(&red.gadget.graph);
                let local = |v: VertexId| ids.binary_search(&v).expect("matched vertex is present");
                let mut text = String::new();
                for (u, v) in red.matching.pairs() {
                    text.push_str(&format!("{} {}\n", local(u), local(v)));
                }
                fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
            }
            red.gadget
        }
    };
    io.text(&write_edge_list(&built.graph).0)
}

fn pivot_strategy(spec: &str) -> Result<PivotStrategy> {
    Ok(match spec {
        "first" => PivotStrategy::FirstVertex,
        "balanced" => PivotStrategy::Balanced,
        _ => match spec.strip_prefix("named:") {
            Some(path) => PivotStrategy::NamedFirst(
                read(Path::new(path))?
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty() && !l.starts_with('#'))
                    .map(str::to_string)
                    .collect(),
            ),
            None => bail!("unknown pivot {spec:?}; expected first, balanced or named:FILE"),
        },
    })
}

fn estimate_value(e: &CountEstimate) -> Value {
    match &e.exact {
        Some(x) => big(x.to_string()),
        None => Value::from(e.value),
    }
}

fn count(io: &Io, a: &CountArgs) -> Result<()> {
    let g = io.graph()?;
    let backend = match a.backend {
        BackendArg::Enum => PermanentBackend::Enumeration,
        BackendArg::Ryser => PermanentBackend::Ryser { cap: a.ryser_cap },
    };
    let mode = format!("{:?}", a.mode).to_lowercase();
    let mut t = Table::new(&["mode", "value", "exact"]);
    match a.mode {
        Mode::Brute => {
            t.push(record! {"mode" => mode, "value" => big(count_perfect(&g).to_string()), "exact" => true});
        }
        Mode::Ryser => {
            let value = match g.bipartition() {
                None => bail!("ryser mode needs a bipartite graph"),
                Some((l, r)) if l.len() != r.len() => Value::from(0),
                Some((l, r)) => {
                    let rows: Vec<Vec<bool>> = l.iter().map(|&x| r.iter().map(|&y| g.has_edge(x, y)).collect()).collect();
                    match ryser_permanent(&BipartiteWeighted::from_biadjacency(&rows)?, a.ryser_cap)? {
                        PermanentValue::Exact(x) => big(x.to_string()),
                        PermanentValue::Float(x) => Value::from(x),
                    }
                }
            };
            t.push(record! {"mode" => mode, "value" => value, "exact" => true});
        }
        Mode::Recursive => {
            let r = recursive_count(&g, a.eps, &pivot_strategy(&a.pivot)?, &backend)?;
            let s = &r.stats;
            t = Table::new(&[
                "mode",
                "value",
                "exact",
                "calls",
                "max_depth",
                "memo_hits",
                "permanent_calls",
                "max_permanent_dim",
                "max_d_component",
            ]);
            t.push(record! {
                "mode" => mode,
                "value" => estimate_value(&r.estimate),
                "exact" => r.estimate.exact.is_some(),
                "calls" => s.calls,
                "max_depth" => s.max_depth,
                "memo_hits" => s.memo_hits,
                "permanent_calls" => s.permanent_calls,
                "max_permanent_dim" => s.max_permanent_dim,
                "max_d_component" => s.max_d_component,
            });
        }
        Mode::Fpt => {
            let r = fpt_count(&g, a.eps, a.k_max, &backend)?;
            let orders: Vec<usize> = r.components.iter().flat_map(|c| c.orders.iter().copied()).collect();
            t = Table::new(&[
                "mode",
                "value",
                "exact",
                "components",
                "max_order",
                "max_contracted_vertices",
                "c_fallbacks",
            ]);
            t.push(record! {
                "mode" => mode,
                "value" => estimate_value(&r.estimate),
                "exact" => r.estimate.exact.is_some(),
                "components" => r.components.len(),
                "max_order" => orders.iter().max().copied().unwrap_or(0),
                "max_contracted_vertices" => r.components.iter().flat_map(|c| &c.contractions).map(|c| c.vertices).max().unwrap_or(0),
                "c_fallbacks" => r.components.iter().filter(|c| c.c_fallback).count(),
            });
        }
    }
    io.table(&t, Format::Records)
}

fn holes_table(io: &Io) -> Result<()> {
    let g = io.graph()?;
    let table = hole_pattern_table(&g);
    let mut t = Table::new(&["u", "v", "count"]);
    for p in table.patterns() {
        if let HolePattern::Near(u, v) = p {
            t.push(record! {"u" => name(&g, u), "v" => name(&g, v), "count" => big(table.get(p).to_string())});
        }
    }
    t.push(record! {"pattern" => "perfect", "count" => big(table.perfect.to_string())});
    io.table(&t, Format::Csv)
}

fn decompose(io: &Io) -> Result<()> {
    let g = io.graph()?;
    let ge = gallai_edmonds(&g);
    let mut t = Table::new(&["class", "component", "size", "fc_order", "vertices"]);
    for (i, comp) in ge.d_components.iter().enumerate() {
        let order = fc_order(&g.induced_subgraph(comp)?)?.order;
        t.push(record! {"class" => "D", "component" => i, "size" => comp.len(), "fc_order" => order, "vertices" => names(&g, comp)});
    }
    for (class, set) in [("A", &ge.a), ("C", &ge.c)] {
        t.push(record! {"class" => class, "component" => Value::Null, "size" => set.len(), "fc_order" => Value::Null, "vertices" => names(&g, set)});
    }
    io.table(&t, Format::Records)
}

fn fc_order_cmd(io: &Io) -> Result<()> {
    let g = io.graph()?;
    let fc = fc_order(&g)?;
    let base = name(&g, fc.witness.base);
    let mut t = Table::new(&["order", "base", "ear", "length", "path"]);
    for (i, ear) in fc.witness.ears.iter().enumerate() {
        t.push(record! {"order" => fc.order, "base" => base.clone(), "ear" => i + 1, "length" => ear.len(), "path" => names(&g, &ear.path)});
    }
    if fc.witness.ears.is_empty() {
        t.push(record! {"order" => fc.order, "base" => base});
    }
    io.table(&t, Format::Records)
}

fn read_matching(g: &Graph, path: &Path) -> Result<Matching> {
    let mut pairs = Vec::new();
    for (i, line) in read(path)?.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = toks.as_slice() else {
            bail!("{}:{}: expected `u v`", path.display(), i + 1);
        };
        pairs.push((resolve(g, a)?, resolve(g, b)?));
    }
    Ok(Matching::from_pairs(g, &pairs)?)
}

fn blossoms(io: &Io, a: &BlossomArgs) -> Result<()> {
    let g = io.graph()?;
    let w = resolve(&g, &a.hole)?;
    let m = match &a.matching {
        Some(p) => read_matching(&g, p)?,
        None => Matching::from_pairs(&g, &maximum_matching(&g.delete_vertices(&[w])?).pairs())?,
    };
    let list = if a.min {
        minimum_blossom(&g, &m, w)?.into_iter().collect()
    } else {
        let l = enumerate_blossoms(&g, &m, w, a.cap)?;
        if l.truncated {
            eprintln!("warning: stopped at the cap of {} blossoms", a.cap);
        }
        l.blossoms
    };
    let mut t = Table::new(&["index", "length", "cycle"]);
    for (i, b) in list.iter().enumerate() {
        t.push(record! {"index" => i, "length" => b.len(), "cycle" => names(&g, &b.cycle)});
    }
    io.table(&t, Format::Csv)
}

fn chain_kind(g: &Graph, o: &ChainOpts) -> Result<ChainKind> {
    Ok(match o.weights {
        WeightArg::Broder => ChainKind::Broder,
        WeightArg::Jsv => ChainKind::Jsv(HoleWeightFn::jsv(&hole_pattern_table(g))),
        WeightArg::File => {
            let p = o
                .weight_file
                .as_ref()
                .ok_or_else(|| anyhow!("--weights file needs --weight-file"))?;
            ChainKind::Jsv(HoleWeightFn::parse(&read(p)?).context("parsing the weight file")?)
        }
    })
}

fn near_cut(g: &Graph, spec: &str) -> Result<HolePattern> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["near", a, b] => HolePattern::near(resolve(g, a)?, resolve(g, b)?)
            .ok_or_else(|| anyhow!("cut {spec:?} needs two distinct vertices")),
        _ => bail!("unknown cut {spec:?}; expected near:A:B"),
    }
}

fn pattern_name(g: &Graph, p: HolePattern) -> String {
    match p {
        HolePattern::Perfect => "perfect".into(),
        HolePattern::Near(u, v) => format!("N({};{})", name(g, u), name(g, v)),
    }
}

fn chain_analyze(io: &Io, o: &ChainOpts, cut: Option<&str>, mixing: Option<f64>, max_steps: usize) -> Result<()> {
    let g = io.graph()?;
    let model = build_chain_model(&g, &chain_kind(&g, o)?, o.cap)?;
    let cuts = match cut {
        Some(c) => vec![near_cut(&g, c)?],
        None => model.patterns.clone(),
    };
    let mix = mixing.map(|d| model.kernel.mixing_time(d, max_steps));
    let mut t = Table::new(&[
        "cut",
        "states",
        "size",
        "pi_s",
        "pi_complement",
        "phi",
        "mixing_lower_bound",
        "mixing_time",
        "mixing_capped",
    ]);
    for p in cuts {
        let r = model.kernel.conductance(&model.select_patterns(&[p]))?;
        t.push(record! {
            "cut" => pattern_name(&g, p),
            "states" => model.len(),
            "size" => r.size,
            "pi_s" => r.pi_s,
            "pi_complement" => r.pi_complement,
            "phi" => r.phi,
            "mixing_lower_bound" => r.mixing_lower_bound,
            "mixing_time" => mix.map(|m| m.steps),
            "mixing_capped" => mix.map(|m| m.capped),
        });
    }
    io.table(&t, Format::Csv)
}

fn chain_run(io: &Io, o: &ChainOpts, steps: u64, every: Option<u64>, seed: u64, occupancy: bool) -> Result<()> {
    let g = io.graph()?;
    let kind = chain_kind(&g, o)?;
    let start = maximum_matching(&g);
    if holes(&g, &start).len() > 2 {
        bail!("the graph has no perfect or near-perfect matching");
    }
    let model = build_chain_model(&g, &kind, o.cap).ok();
    let every = every.unwrap_or((steps / 10).max(1));
    let s = simulate(&g, &kind, &start, steps, seed, every, model.as_ref())?;
    let t = if occupancy {
        let mut t = Table::new(&["pattern", "visits", "fraction"]);
        for (&p, &n) in &s.occupancy {
            t.push(record! {"pattern" => pattern_name(&g, p), "visits" => n, "fraction" => n as f64 / (steps + 1) as f64});
        }
        t
    } else {
        let mut t = Table::new(&["step", "perfect_visits", "perfect_fraction", "tv"]);
        for c in &s.checkpoints {
            t.push(record! {
                "step" => c.step,
                "perfect_visits" => c.perfect_visits,
                "perfect_fraction" => c.perfect_visits as f64 / (c.step + 1) as f64,
                "tv" => c.tv,
            });
        }
        t
    };
    io.table(&t, Format::Csv)
}

fn parse_cut(spec: &str) -> Result<Cut> {
    if let Some(rest) = spec.strip_prefix("near:") {
        let (a, b) = rest
            .split_once(':')
            .ok_or_else(|| anyhow!("cut {spec:?} should read near:A:B"))?;
        return Ok(Cut::NearClass(a.into(), b.into()));
    }
    if let Some(rest) = spec.strip_prefix("s:") {
        let ix = rest
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .with_context(|| format!("cut {spec:?} should list S indices"))?;
        return Ok(Cut::SUnion(ix));
    }
    bail!("unknown cut {spec:?}; expected near:A:B or s:I,J")
}

fn experiment(
    io: &Io,
    family: FamilyArg,
    ks: std::ops::RangeInclusive<usize>,
    cut: Option<&str>,
    weights: WeightArg,
    cap: usize,
    perfect_mass: bool,
) -> Result<()> {
    if ks.is_empty() {
        bail!("empty k range");
    }
    let family = match family {
        FamilyArg::Torpid => Family::Torpid,
        FamilyArg::Counterexample => Family::Counterexample,
    };
    if perfect_mass {
        let mut t = Table::new(&["k", "perfect", "omega", "ratio"]);
        for r in broder_perfect_mass(family, ks)? {
            t.push(record! {"k" => r.k, "perfect" => big(r.perfect.to_string()), "omega" => big(r.omega.to_string()), "ratio" => r.ratio});
        }
        return io.table(&t, Format::Csv);
    }
    let cut = match (cut, family) {
        (Some(c), _) => parse_cut(c)?,
        (None, Family::Torpid) => Cut::NearClass("u".into(), "v".into()),
        (None, Family::Counterexample) => Cut::SUnion(vec![1, 3]),
    };
    let weights = match weights {
        WeightArg::Broder => Weights::Broder,
        WeightArg::Jsv => Weights::Jsv,
        WeightArg::File => bail!("experiments use broder or jsv weights"),
    };
    let mut t = Table::new(&[
        "family",
        "k",
        "cut",
        "omega",
        "pi_a",
        "phi",
        "mixing_lower_bound",
        "ratio_bound",
        "status",
    ]);
    for r in torpid_experiment(family, ks, &cut, weights, cap)? {
        t.push(record! {
            "family" => r.family.name(),
            "k" => r.k,
            "cut" => r.cut,
            "omega" => r.omega,
            "pi_a" => r.pi_a,
            "phi" => r.phi,
            "mixing_lower_bound" => r.lower_bound,
            "ratio_bound" => r.ratio_bound,
            "status" => r.skipped.unwrap_or_else(|| "ok".into()),
        });
    }
    io.table(&t, Format::Csv)
}

fn accept(io: &Io, suite: &str) -> Result<ExitCode> {
    if suite != "all" && !SUITES.contains(&suite) {
        bail!("unknown suite {suite:?}; available: all, {}", SUITES.join(", "));
    }
    let verdicts = run_suite(suite)?;
    let pass = verdicts.iter().all(|v| v.pass);
    match io.format {
        None => {
            let mut s = String::new();
            for v in &verdicts {
                s.push_str(&v.line());
                s.push('\n');
                for n in &v.notes {
                    s.push_str(&format!("    note: {n}\n"));
                }
                for f in &v.failures {
                    s.push_str(&format!("    failed: {f}\n"));
                }
            }
            io.text(&s)?;
        }
        Some(f) => {
            let mut t = Table::new(&["criterion", "suite", "pass", "checks", "failed", "notes", "failures"]);
            for v in &verdicts {
                t.push(record! {
                    "criterion" => v.criterion,
                    "suite" => v.suite,
                    "pass" => v.pass,
                    "checks" => v.checks,
                    "failed" => v.failed,
                    "notes" => v.notes.join("; "),
                    "failures" => v.failures.join("; "),
                });
            }
            let mut out = io.sink()?;
            t.write(f, &mut out)?;
            out.flush()?;
        }
    }
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
