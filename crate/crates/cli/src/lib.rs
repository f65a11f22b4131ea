//! Batch front-end for graphonlab. Every subcommand reads JSON files and
//! writes one JSON document to stdout (or `--out`).
//!
//! Exit codes: 0 success, 2 a checked inequality failed, 3 budget exceeded,
//! 4 invalid input (malformed JSON, failed validation, bad arguments),
//! 1 anything else.

pub mod format;
pub mod registry;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use graphonlab::commonality::{
    commonality_value_with, k_common_value_with, search_counterexample, theorem_regime_check_with, GradientPlan,
    RegimeParams, SearchConfig,
};
use graphonlab::cutnorm::{c4_deviation_bound, counting_lemma_bound, cut_norm_exact, sandwich_check};
use graphonlab::expansion::{subset_expansion_with, ExpansionOptions};
use graphonlab::indep::independence_ratio;
use graphonlab::lemmas::{omega_alpha, omega_alpha_check, random_suite, verify, LemmaId, LemmaInput};
use graphonlab::random_graph::{is_locally_dense, random_high_girth};
use graphonlab::report::InequalityCheck;
use graphonlab::spectral::{decompose, estimate_report};
use graphonlab::witness::{build_target, build_witness, Regime};
use graphonlab::{
    chromatic::chromatic_number, construct_family, hom_density_graph, par, rooted_density_with, rooted_sum,
    validate_coloring, BlockFunction, DensityOptions, Error, Family, Graph, HomPlan, Method, RootedGraph,
    StepFunction,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_INEQUALITY: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INVALID: i32 = 4;

/// Environment variable overriding the density operation budget.
pub const BUDGET_ENV: &str = "GRAPHONLAB_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "graphonlab", version, about = "Exact computation on step graphons")]
pub struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Edge density, homomorphism densities, commonality values and gradients.
    Density(DensityArgs),
    /// Rooted homomorphism densities as a tensor over root blocks.
    Rooted(RootedArgs),
    /// Exact cut norm and the cut-norm inequalities.
    Cutnorm(CutnormArgs),
    /// Spectral decomposition and spectral density formulas.
    Spectrum(SpectrumArgs),
    /// Expansion of t(H, p + U) over edge subsets.
    Expand(ExpandArgs),
    /// Graph properties and edge-subset groups of a pathed witness.
    Classify(ClassifyArgs),
    /// Graph families, witnesses, targets, random graphs and graphon transforms.
    Construct(ConstructArgs),
    /// One lemma instance, the omega/alpha constants, or a colouring.
    Verify(VerifyArgs),
    /// Seeded random suite over the lemma registry.
    Suite(SuiteArgs),
    /// Projected-gradient search for colourings below the random threshold.
    Search(SearchArgs),
    /// Empirical probe of the target-graph conclusion inequality.
    Regime(RegimeArgs),
    /// The delta-independence ratio of a graphon.
    #[command(name = "indep-ratio")]
    IndepRatio(IndepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    Auto,
    Enumerate,
    Eliminate,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Enumerate => Method::Enumerate,
            MethodArg::Eliminate => Method::Eliminate,
        }
    }
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    graphon: Option<PathBuf>,
    /// Finite host graph: prints t(H, G).
    #[arg(long)]
    host: Option<PathBuf>,
    /// Colour classes of a k-colouring: prints the k-commonality value.
    #[arg(long, num_args = 1..)]
    coloring: Vec<PathBuf>,
    /// Prints t(H, W) + t(H, 1 - W) against 2^{1 - |E(H)|}.
    #[arg(long)]
    commonality: bool,
    /// Prints the gradient of t(H, .) in the block values.
    #[arg(long)]
    gradient: bool,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
}

#[derive(Debug, Args)]
pub struct RootedArgs {
    /// Graph with a `roots` field.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    graphon: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
}

#[derive(Debug, Args)]
pub struct CutnormArgs {
    #[arg(long)]
    kernel: Option<PathBuf>,
    #[arg(long)]
    graphon: Option<PathBuf>,
    /// Checks ||U||^4 <= t(C4, U) <= 4||U|| and t(P2, U) <= 2||U|| for --kernel.
    #[arg(long)]
    sandwich: bool,
    /// Checks p^4 + ||W - p||^4 / 8 <= t(C4, W) for --graphon.
    #[arg(long = "c4-deviation")]
    c4_deviation: bool,
    /// Graph H for |t(H, W) - t(H, W')| <= |E(H)| ||W - W'||.
    #[arg(long)]
    counting: Option<PathBuf>,
    /// Second graphon W' for --counting.
    #[arg(long)]
    other: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Graphon or kernel file.
    #[arg(long)]
    graphon: PathBuf,
    /// Prints sum_i lambda_i^n.
    #[arg(long)]
    cycle: Option<u32>,
    /// Prints sum_i lambda_i^{n-1} <j, f_i>^2.
    #[arg(long)]
    path: Option<u32>,
    /// Block function to expand in the eigenbasis.
    #[arg(long)]
    project: Option<PathBuf>,
    /// Evaluates the spectral estimates in terms of p and t(C4, W) - p^4.
    #[arg(long)]
    estimates: bool,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    graphon: PathBuf,
    #[arg(long = "max-edges", default_value_t = graphonlab::expansion::MAX_EXPANSION_EDGES)]
    max_edges: usize,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    girth: bool,
    #[arg(long)]
    chromatic: bool,
    #[arg(long = "locally-dense")]
    locally_dense: bool,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Base graph G of the witness.
    #[arg(long)]
    base: Option<PathBuf>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    attach: Option<String>,
    /// Edge subset `[[u, v], ..]` of H_l.
    #[arg(long)]
    subset: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// P<n>, C<n>, K<n>, K<a>,<b> or K<a>|<l>,<b>.
    #[arg(long)]
    family: Option<String>,
    #[arg(long, num_args = 2, value_names = ["G", "H"])]
    sum: Vec<PathBuf>,
    #[arg(long)]
    witness: Option<PathBuf>,
    #[arg(long)]
    attach: Option<String>,
    #[arg(long)]
    target: Option<PathBuf>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    regime: Option<String>,
    #[arg(long = "edge-subgraph")]
    edge_subgraph: Option<PathBuf>,
    #[arg(long)]
    edges: Option<PathBuf>,
    /// Number of vertices of the random graph.
    #[arg(long = "random-girth")]
    random_girth: Option<usize>,
    #[arg(long)]
    girth: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    complement: Option<PathBuf>,
    #[arg(long)]
    deviation: Option<PathBuf>,
    #[arg(long)]
    restrict: Option<PathBuf>,
    #[arg(long)]
    weights: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    lemma: Option<String>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long = "omega-alpha")]
    omega_alpha: bool,
    #[arg(long = "omega-alpha-check")]
    omega_alpha_check: bool,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    rmax: Option<usize>,
    #[arg(long)]
    graphon: Option<PathBuf>,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, num_args = 1..)]
    coloring: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    trials: usize,
    /// `all` or a comma-separated list of lemma ids.
    #[arg(long, default_value = "all")]
    lemmas: String,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Number of colours.
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 3)]
    blocks: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    iters: usize,
    #[arg(long, default_value_t = 0.05)]
    step: f64,
    #[arg(long = "measure-samples", default_value_t = 4)]
    measure_samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Debug, Args)]
pub struct RegimeArgs {
    /// Rooted graph H with a single root.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    graphon: PathBuf,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    ell: usize,
    /// local, nonlocal, k-common or none.
    #[arg(long)]
    regime: String,
    #[arg(long, default_value_t = 1e-4)]
    gamma0: f64,
    #[arg(long, default_value_t = 1e-2)]
    eps0: f64,
}

#[derive(Debug, Args)]
pub struct IndepArgs {
    #[arg(long)]
    graphon: PathBuf,
    #[arg(long)]
    delta: f64,
    #[arg(long, default_value_t = 32)]
    resolution: usize,
}

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(Error::Budget(_)) => EXIT_BUDGET,
            CliError::Lib(_) | CliError::Usage(_) => EXIT_INVALID,
            CliError::Io(_) => EXIT_OTHER,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(m) | CliError::Usage(m) => f.write_str(m),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A JSON result and whether every checked inequality in it held.
pub struct Output {
    pub value: Value,
    pub pass: bool,
}

impl Output {
    fn ok(value: Value) -> Self {
        Output { value, pass: true }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> CliResult<Graph> {
    Ok(Graph::from_json_str(&read(path)?)?)
}

fn load_rooted(path: &Path) -> CliResult<RootedGraph> {
    Ok(RootedGraph::from_json_str(&read(path)?)?)
}

fn load_step(path: &Path) -> CliResult<StepFunction> {
    Ok(StepFunction::from_json_str(&read(path)?)?)
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Lib(e.into()))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialise")
}

fn parse_attach(s: &Option<String>) -> CliResult<Option<(usize, usize)>> {
    let Some(s) = s else { return Ok(None) };
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => {
            let a = a.trim().parse().map_err(|_| usage(format!("bad attachment vertex {a:?}")))?;
            let b = b.trim().parse().map_err(|_| usage(format!("bad attachment vertex {b:?}")))?;
            Ok(Some((a, b)))
        }
        _ => Err(usage("--attach takes two vertices, e.g. 0,2")),
    }
}

fn need<T: Clone>(x: &Option<T>, flag: &str) -> CliResult<T> {
    x.clone().ok_or_else(|| usage(format!("{flag} is required here")))
}

fn checks_output(checks: Vec<InequalityCheck>) -> Output {
    let pass = checks.iter().all(|c| c.pass);
    Output {
        value: json!({ "checks": checks, "pass": pass }),
        pass,
    }
}

fn density(a: &DensityArgs) -> CliResult<Output> {
    let opts = DensityOptions {
        method: a.method.into(),
        ..DensityOptions::default()
    };
    if !a.coloring.is_empty() {
        let h = load_graph(&need(&a.graph, "--graph")?)?;
        let ws = a.coloring.iter().map(|p| load_step(p)).collect::<CliResult<Vec<_>>>()?;
        return Ok(Output::ok(to_value(&k_common_value_with(&h, &ws, &opts)?)));
    }
    if let Some(host) = &a.host {
        let h = load_graph(&need(&a.graph, "--graph")?)?;
        return Ok(Output::ok(json!({ "t": hom_density_graph(&h, &load_graph(host)?)? })));
    }
    let w = load_step(&need(&a.graphon, "--graphon")?)?;
    let Some(graph) = &a.graph else {
        return Ok(Output::ok(json!({ "p": w.density() })));
    };
    let h = load_graph(graph)?;
    if a.commonality {
        return Ok(Output::ok(to_value(&commonality_value_with(&h, &w, &opts)?)));
    }
    if a.gradient {
        let g = GradientPlan::new(&h)?.gradient(&w, &opts)?;
        let k = w.blocks();
        let rows: Vec<Vec<f64>> = g.chunks(k).map(|r| r.to_vec()).collect();
        return Ok(Output::ok(json!({ "gradient": rows })));
    }
    Ok(Output::ok(json!({ "t": HomPlan::new(&h).density(&w, &opts)? })))
}

fn rooted(a: &RootedArgs) -> CliResult<Output> {
    let h = load_rooted(&a.graph)?;
    let w = load_step(&a.graphon)?;
    let opts = DensityOptions {
        method: a.method.into(),
        ..DensityOptions::default()
    };
    let r = rooted_density_with(&h, &w, &opts)?;
    Ok(Output::ok(json!({
        "blocks": r.blocks(),
        "roots": h.roots(),
        "values": r.values(),
    })))
}

fn cutnorm(a: &CutnormArgs) -> CliResult<Output> {
    if a.c4_deviation {
        let w = load_step(&need(&a.graphon, "--graphon")?)?;
        return Ok(checks_output(c4_deviation_bound(&w)?));
    }
    if let Some(h) = &a.counting {
        let h = load_graph(h)?;
        let w1 = load_step(&need(&a.graphon, "--graphon")?)?;
        let w2 = load_step(&need(&a.other, "--other")?)?;
        return Ok(checks_output(counting_lemma_bound(&h, &w1, &w2)?));
    }
    let u = load_step(&need(&a.kernel, "--kernel")?)?;
    if a.sandwich {
        return Ok(checks_output(sandwich_check(&u)?));
    }
    Ok(Output::ok(to_value(&cut_norm_exact(&u)?)))
}

fn spectrum(a: &SpectrumArgs) -> CliResult<Output> {
    let w = load_step(&a.graphon)?;
    let s = decompose(&w);
    if let Some(n) = a.cycle {
        if n < 3 {
            return Err(usage("--cycle needs n >= 3"));
        }
        return Ok(Output::ok(json!({ "t": s.power_sum(n) })));
    }
    if let Some(n) = a.path {
        if n < 2 {
            return Err(usage("--path needs n >= 2"));
        }
        return Ok(Output::ok(json!({ "t": s.path_sum(n) })));
    }
    if let Some(g) = &a.project {
        let g: BlockFunction = load_json(g)?;
        return Ok(Output::ok(json!({ "coefficients": s.project(&g)? })));
    }
    if a.estimates {
        let r = estimate_report(&s, &w)?;
        let pass = r.checks.iter().all(|c| c.pass);
        let mut value = to_value(&r);
        value["pass"] = json!(pass);
        return Ok(Output { value, pass });
    }
    Ok(Output::ok(to_value(&s)))
}

fn expand(a: &ExpandArgs) -> CliResult<Output> {
    let w = load_step(&a.graphon)?;
    let opts = ExpansionOptions {
        max_edges: a.max_edges,
        ..ExpansionOptions::default()
    };
    let h = load_graph(&a.graph)?;
    Ok(Output::ok(to_value(&subset_expansion_with(&h, &w, &opts)?)))
}

fn classify(a: &ClassifyArgs) -> CliResult<Output> {
    if let Some(base) = &a.base {
        let g = load_graph(base)?;
        let hl = build_witness(&g, parse_attach(&a.attach)?)?.with_path(need(&a.ell, "--ell")?)?;
        let f: Vec<[usize; 2]> = load_json(&need(&a.subset, "--subset")?)?;
        let pairs: Vec<(usize, usize)> = f.iter().map(|e| (e[0], e[1])).collect();
        return Ok(Output::ok(json!({ "group": hl.classify(&pairs)? })));
    }
    let g = load_graph(&need(&a.graph, "--graph")?)?;
    if a.girth {
        return Ok(Output::ok(json!({ "girth": g.girth() })));
    }
    if a.chromatic {
        return Ok(Output::ok(json!({ "chromatic_number": chromatic_number(&g)? })));
    }
    if a.locally_dense {
        let seed = need(&a.seed, "--seed")?;
        let r = is_locally_dense(&g, need(&a.rho, "--rho")?, need(&a.d, "--d")?, a.samples, seed)?;
        return Ok(Output::ok(to_value(&r)));
    }
    Err(usage("classify needs one of --girth, --chromatic, --locally-dense or --base"))
}

fn construct(a: &ConstructArgs) -> CliResult<Output> {
    if let Some(f) = &a.family {
        return Ok(Output::ok(construct_family(Family::parse(f)?)?.to_json()));
    }
    if let [g, h] = a.sum.as_slice() {
        return Ok(Output::ok(rooted_sum(&load_rooted(g)?, &load_rooted(h)?)?.to_json()));
    }
    if let Some(base) = &a.witness {
        let w = build_witness(&load_graph(base)?, parse_attach(&a.attach)?)?;
        return Ok(Output::ok(match a.ell {
            Some(ell) => w.with_path(ell)?.graph().to_json(),
            None => w.rooted().to_json(),
        }));
    }
    if let Some(h) = &a.target {
        let regime = Regime::parse(&need(&a.regime, "--regime")?)?;
        let t = build_target(
            &load_rooted(h)?,
            need(&a.m, "--m")?,
            need(&a.n, "--n")?,
            need(&a.ell, "--ell")?,
            regime,
        )?;
        return Ok(Output::ok(t.to_json()));
    }
    if let Some(g) = &a.edge_subgraph {
        let f: Vec<[usize; 2]> = load_json(&need(&a.edges, "--edges")?)?;
        let pairs: Vec<(usize, usize)> = f.iter().map(|e| (e[0], e[1])).collect();
        return Ok(Output::ok(load_graph(g)?.edge_subgraph(&pairs)?.to_json()));
    }
    if let Some(n) = a.random_girth {
        let (g, report) = random_high_girth(n, need(&a.girth, "--girth")?, need(&a.seed, "--seed")?)?;
        return Ok(Output::ok(json!({ "graph": g, "report": report })));
    }
    if let Some(w) = &a.complement {
        return Ok(Output::ok(load_step(w)?.complement()?.to_json()));
    }
    if let Some(w) = &a.deviation {
        let (p, u) = load_step(w)?.deviation()?;
        return Ok(Output::ok(json!({ "p": p, "kernel": u })));
    }
    if let Some(w) = &a.restrict {
        let h: BlockFunction = load_json(&need(&a.weights, "--weights")?)?;
        return Ok(Output::ok(load_step(w)?.restrict(&h)?.to_json()));
    }
    Err(usage(
        "construct needs one of --family, --sum, --witness, --target, --edge-subgraph, --random-girth, --complement, --deviation or --restrict",
    ))
}

fn verify_cmd(a: &VerifyArgs) -> CliResult<Output> {
    if !a.coloring.is_empty() {
        let ws = a.coloring.iter().map(|p| load_step(p)).collect::<CliResult<Vec<_>>>()?;
        validate_coloring(&ws)?;
        return Ok(Output::ok(json!({ "colors": ws.len(), "valid": true })));
    }
    if a.omega_alpha {
        let t = omega_alpha(need(&a.delta, "--delta")?, need(&a.rmax, "--rmax")?)?;
        return Ok(Output::ok(to_value(&t)));
    }
    if a.omega_alpha_check {
        let w = load_step(&need(&a.graphon, "--graphon")?)?;
        let h = load_graph(&need(&a.graph, "--graph")?)?;
        let r = omega_alpha_check(&w, &h, need(&a.delta, "--delta")?)?;
        let pass = r.pass;
        return Ok(Output {
            value: to_value(&r),
            pass,
        });
    }
    let id = LemmaId::parse(&need(&a.lemma, "--lemma")?)?;
    let input: LemmaInput = load_json(&need(&a.input, "--input")?)?;
    let r = verify(id, &input)?;
    let pass = r.pass();
    let mut value = to_value(&r);
    value["pass"] = json!(pass);
    Ok(Output { value, pass })
}

fn suite(a: &SuiteArgs) -> CliResult<Output> {
    let ids = LemmaId::parse_set(&a.lemmas)?;
    let summaries = random_suite(a.seed, a.trials, &ids)?;
    let pass = summaries.iter().all(|s| s.failures == 0);
    Ok(Output {
        value: to_value(&summaries),
        pass,
    })
}

fn search(a: &SearchArgs) -> CliResult<Output> {
    let h = load_graph(&a.graph)?;
    let cfg = SearchConfig {
        colours: a.k,
        blocks: a.blocks,
        seed: a.seed,
        restarts: a.restarts,
        iters: a.iters,
        step: a.step,
        measure_samples: a.measure_samples,
        tolerance: a.tolerance,
        density: DensityOptions::default(),
    };
    Ok(Output::ok(to_value(&search_counterexample(&h, &cfg)?)))
}

fn regime(a: &RegimeArgs) -> CliResult<Output> {
    let h = load_rooted(&a.graph)?;
    let w = load_step(&a.graphon)?;
    let params = RegimeParams {
        gamma0: a.gamma0,
        eps0: a.eps0,
        ..RegimeParams::new(a.m, a.n, a.ell, Regime::parse(&a.regime)?)
    };
    let r = theorem_regime_check_with(&h, &w, &params, &DensityOptions::default())?;
    Ok(Output::ok(to_value(&r)))
}

fn indep(a: &IndepArgs) -> CliResult<Output> {
    let w = load_step(&a.graphon)?;
    Ok(Output::ok(to_value(&independence_ratio(&w, a.delta, a.resolution)?)))
}

pub fn execute(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Density(a) => density(a),
        Command::Rooted(a) => rooted(a),
        Command::Cutnorm(a) => cutnorm(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Expand(a) => expand(a),
        Command::Classify(a) => classify(a),
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Suite(a) => suite(a),
        Command::Search(a) => search(a),
        Command::Regime(a) => regime(a),
        Command::IndepRatio(a) => indep(a),
    }
}

fn apply_budget_env() -> CliResult<()> {
    if let Ok(v) = std::env::var(BUDGET_ENV) {
        let budget: u64 = v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{BUDGET_ENV} must be a non-negative integer, got {v:?}")))?;
        graphonlab::hom::set_default_budget(budget);
    }
    Ok(())
}

/// Parses arguments, runs the command, prints the result and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = apply_budget_env() {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    match par::with_threads(cli.threads, || execute(&cli)) {
        Ok(out) => emit(&out, cli.out.as_deref()),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Writes a result and maps its pass flag to the exit code.
pub fn emit(out: &Output, path: Option<&Path>) -> i32 {
    let text = format::to_string(&out.value) + "\n";
    if let Some(path) = path {
        if let Err(e) = fs::write(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_OTHER;
        }
    } else {
        print!("{text}");
    }
    if out.pass {
        EXIT_OK
    } else {
        EXIT_INEQUALITY
    }
}
