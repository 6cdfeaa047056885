//! `ugc`: exact and sampled clustering of uncertain graphs from the command
//! line. [`run`] is the whole program; `main` only forwards the process
//! arguments and exit code.

mod bench;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use ugraph_cluster::bounds::{samples_for_kcenter_simple, samples_for_kmedian};
use ugraph_cluster::exact::DEFAULT_EDGE_CAP;
use ugraph_cluster::kcenter::{self, EpsRule, KCenterEps};
use ugraph_cluster::kmedian::{self, SamplingOptions};
use ugraph_cluster::report::GraphInfo;
use ugraph_cluster::sampling::derive_seed;
use ugraph_cluster::{gen, parse_graph, Connectivity, Error, ExactOracle, NodeId, SampleSet, SolveReport, UncertainGraph};

pub use bench::{BenchMatrix, BenchRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_PARAMETER: i32 = 4;
pub const EXIT_CAP: i32 = 5;

const DEFAULT_MAX_SAMPLES: usize = 20_000_000;

#[derive(Parser, Debug)]
#[command(name = "ugc", version, about = "k-median and k-center clustering of uncertain graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// All-pairs connection probabilities by exhaustive enumeration.
    Exact(ExactArgs),
    /// Draw possible worlds, optionally caching them.
    Sample(SampleArgs),
    SolveKmedian(KMedianArgs),
    SolveKcenter(KCenterArgs),
    /// Emit a synthetic graph in edge-list form.
    Gen(GenArgs),
    /// Run a matrix of solves, one JSON line per cell.
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Write the document here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub(crate) struct Caps {
    /// Largest number of edges enumerated per connected component.
    #[arg(long, env = "UGC_EXACT_CAP", default_value_t = DEFAULT_EDGE_CAP)]
    pub exact_cap: usize,
    /// Largest sample pool any sampling solver may hold.
    #[arg(long, env = "UGC_MAX_SAMPLES", default_value_t = DEFAULT_MAX_SAMPLES)]
    pub max_samples: usize,
}

#[derive(Args, Debug)]
struct ExactArgs {
    graph: PathBuf,
    #[command(flatten)]
    caps: Caps,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SampleArgs {
    graph: PathBuf,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the drawn worlds to this binary cache.
    #[arg(long)]
    cache_out: Option<PathBuf>,
    /// Read worlds from a cache instead of drawing them.
    #[arg(long, conflicts_with_all = ["samples", "cache_out"])]
    cache_in: Option<PathBuf>,
    /// Include the estimated all-pairs table.
    #[arg(long)]
    table: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KMedianAlgo {
    OracleGreedy,
    Kmd2,
    Search,
    SearchPlus,
    Adaptive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KCenterAlgo {
    Gonzalez,
    Search,
    GonzalezSampled,
    Guess,
    SearchPlus,
}

#[derive(Args, Debug, Clone, Default)]
pub(crate) struct SolveKnobs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub epsilon1: Option<f64>,
    #[arg(long)]
    pub epsilon2: Option<f64>,
    #[arg(long)]
    pub epsilon3: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Fixed pool size for the fixed-sample solvers.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Lower bound on the optimum used to size fixed pools.
    #[arg(long)]
    pub opt_bound: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use the worlds of this cache as the fixed pool.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Also score the result against exact probabilities.
    #[arg(long)]
    pub score_exact: bool,
}

#[derive(Args, Debug)]
struct KMedianArgs {
    graph: PathBuf,
    #[arg(long, value_enum)]
    algo: KMedianAlgo,
    #[command(flatten)]
    knobs: SolveKnobs,
    #[command(flatten)]
    caps: Caps,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct KCenterArgs {
    graph: PathBuf,
    #[arg(long, value_enum)]
    algo: KCenterAlgo,
    #[command(flatten)]
    knobs: SolveKnobs,
    #[command(flatten)]
    caps: Caps,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenModel {
    ErdosRenyiProbabilistic,
    Path,
    Cycle,
    Grid,
}

#[derive(Args, Debug, Clone, Serialize, serde::Deserialize)]
pub struct GenSpec {
    #[arg(value_enum)]
    pub model: GenModel,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub rows: usize,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub cols: usize,
    /// Edge probability of the regular models.
    #[arg(long, default_value_t = 0.5)]
    #[serde(default = "half")]
    pub p: f64,
    #[arg(long, default_value_t = 0.1)]
    #[serde(default = "tenth")]
    pub density: f64,
    #[arg(long, default_value_t = 0.1)]
    #[serde(default = "tenth")]
    pub p_min: f64,
    #[arg(long, default_value_t = 0.9)]
    #[serde(default = "nine_tenths")]
    pub p_max: f64,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
}

fn half() -> f64 {
    0.5
}

fn tenth() -> f64 {
    0.1
}

fn nine_tenths() -> f64 {
    0.9
}

impl GenSpec {
    pub fn build(&self) -> ugraph_cluster::Result<UncertainGraph> {
        match self.model {
            GenModel::Path => gen::path(self.n, self.p),
            GenModel::Cycle => gen::cycle(self.n, self.p),
            GenModel::Grid => gen::grid(self.rows, self.cols, self.p),
            GenModel::ErdosRenyiProbabilistic => gen::erdos_renyi(self.n, self.density, self.p_min, self.p_max, self.seed),
        }
    }
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    spec: GenSpec,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// JSON matrix of graphs, k values, algorithms and seeds.
    matrix: PathBuf,
    #[command(flatten)]
    caps: Caps,
    #[command(flatten)]
    output: Output,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, kind: "input", message: message.into() }
    }

    fn parameter(message: impl Into<String>) -> Self {
        Failure { code: EXIT_PARAMETER, kind: "parameter", message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Parse { .. }
            | Error::InvalidGraph(_)
            | Error::Cache(_)
            | Error::FingerprintMismatch { .. }
            | Error::InvalidSignature(_)
            | Error::UnknownNode(_)
            | Error::MissingLink { .. } => (EXIT_INPUT, "input"),
            Error::EnumerationCap { .. } | Error::BruteForceCap { .. } | Error::SampleBudget { .. } => (EXIT_CAP, "cap"),
            Error::Parameter(_) | Error::TooManyCenters { .. } | Error::EmptyCenters | Error::EmptySamples => {
                (EXIT_PARAMETER, "parameter")
            }
        };
        Failure { code, kind, message: e.to_string() }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Runs the program on `argv` (including the program name). Documents go to
/// `out`; diagnostics, including a JSON error object, go to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let doc = serde_json::json!({ "error": { "code": f.code, "kind": f.kind, "message": f.message } });
            let _ = writeln!(err, "{doc}");
            f.code
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome<()> {
    match cli.command {
        Command::Exact(a) => {
            let g = read_graph(&a.graph)?;
            let oracle = ExactOracle::with_cap(&g, a.caps.exact_cap)?;
            let doc = ExactDoc {
                graph: GraphInfo::of(&g),
                table: oracle.table().pairs().filter(|(u, v, _)| u < v).map(|(u, v, p)| PairDoc { u, v, p }).collect(),
            };
            emit(&a.output, out, &to_json(&doc))
        }
        Command::Sample(a) => {
            let g = read_graph(&a.graph)?;
            let r = match &a.cache_in {
                Some(path) => load_cache(path, &g)?,
                None => {
                    let count = a.samples.ok_or_else(|| Failure::parameter("--samples is required"))?;
                    SampleSet::generate(&g, a.seed, count)
                }
            };
            if let Some(path) = &a.cache_out {
                std::fs::write(path, ugraph_cluster::encode_sample_set(&r))
                    .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            }
            let table = a.table.then(|| {
                let mut rows = Vec::new();
                for u in g.nodes() {
                    let row = r.raw_row(u);
                    for v in g.nodes().filter(|&v| v > u) {
                        rows.push(PairDoc { u, v, p: row[v.index()] / r.scale() });
                    }
                }
                rows
            });
            let doc = SampleDoc { graph: GraphInfo::of(&g), samples: r.len(), seed: r.seed(), start: r.start(), table };
            emit(&a.output, out, &to_json(&doc))
        }
        Command::SolveKmedian(a) => {
            let g = read_graph(&a.graph)?;
            let report = timed(|| solve_kmedian(&g, a.algo, &a.knobs, &a.caps))?;
            emit(&a.output, out, &report.to_json())
        }
        Command::SolveKcenter(a) => {
            let g = read_graph(&a.graph)?;
            let report = timed(|| solve_kcenter(&g, a.algo, &a.knobs, &a.caps))?;
            emit(&a.output, out, &report.to_json())
        }
        Command::Gen(a) => {
            let g = a.spec.build()?;
            emit_raw(&a.output, out, &g.to_edge_list())
        }
        Command::Bench(a) => {
            let text = std::fs::read_to_string(&a.matrix).map_err(|e| Failure::input(format!("{}: {e}", a.matrix.display())))?;
            let matrix: BenchMatrix = serde_json::from_str(&text).map_err(|e| Failure::input(format!("matrix: {e}")))?;
            let lines = bench::run_matrix(&matrix, &a.caps)?;
            let mut body = String::new();
            for l in lines {
                body.push_str(&l);
                body.push('\n');
            }
            emit_raw(&a.output, out, &body)
        }
    }
}

#[derive(Serialize)]
struct PairDoc {
    u: NodeId,
    v: NodeId,
    p: f64,
}

#[derive(Serialize)]
struct ExactDoc {
    graph: GraphInfo,
    table: Vec<PairDoc>,
}

#[derive(Serialize)]
struct SampleDoc {
    graph: GraphInfo,
    samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    start: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<Vec<PairDoc>>,
}

fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

fn timed(f: impl FnOnce() -> Outcome<SolveReport>) -> Outcome<SolveReport> {
    let start = Instant::now();
    let mut report = f()?;
    report.duration_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    Ok(report)
}

fn emit(output: &Output, out: &mut dyn Write, json: &str) -> Outcome<()> {
    emit_raw(output, out, &format!("{json}\n"))
}

fn emit_raw(output: &Output, out: &mut dyn Write, text: &str) -> Outcome<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| Failure::input(format!("stdout: {e}"))),
    }
}

fn read_graph(path: &Path) -> Outcome<UncertainGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(parse_graph(&text)?)
}

fn load_cache(path: &Path, g: &UncertainGraph) -> Outcome<SampleSet> {
    let bytes = std::fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let r = ugraph_cluster::decode_sample_set(&bytes)?;
    r.check_graph(g)?;
    Ok(r)
}

fn exact_for(g: &UncertainGraph, knobs: &SolveKnobs, caps: &Caps) -> Outcome<Option<ExactOracle>> {
    if knobs.score_exact {
        Ok(Some(ExactOracle::with_cap(g, caps.exact_cap)?))
    } else {
        Ok(None)
    }
}

fn fixed_pool(g: &UncertainGraph, knobs: &SolveKnobs, caps: &Caps, size: impl FnOnce() -> Outcome<usize>) -> Outcome<SampleSet> {
    if let Some(path) = &knobs.cache {
        return load_cache(path, g);
    }
    let count = match knobs.samples {
        Some(s) => s,
        None => size()?,
    };
    if count == 0 {
        return Err(Failure::parameter("--samples must be positive"));
    }
    if count > caps.max_samples {
        return Err(Error::SampleBudget { requested: count, budget: caps.max_samples }.into());
    }
    Ok(SampleSet::generate(g, derive_seed(knobs.seed, 0), count))
}

fn require(x: Option<f64>, flag: &str) -> Outcome<f64> {
    x.ok_or_else(|| Failure::parameter(format!("{flag} is required")))
}

pub(crate) fn solve_kmedian(g: &UncertainGraph, algo: KMedianAlgo, knobs: &SolveKnobs, caps: &Caps) -> Outcome<SolveReport> {
    let k = knobs.k;
    let n = g.node_count();
    let report = match algo {
        KMedianAlgo::OracleGreedy => kmedian::solve_kmedian_oracle(g, k, &ExactOracle::with_cap(g, caps.exact_cap)?)?,
        KMedianAlgo::Kmd2 => kmedian::solve_kmd2_baseline(g, k, &ExactOracle::with_cap(g, caps.exact_cap)?)?,
        KMedianAlgo::Search | KMedianAlgo::SearchPlus => {
            let exact = exact_for(g, knobs, caps)?;
            let r = fixed_pool(g, knobs, caps, || {
                let bound = knobs.opt_bound.unwrap_or(k as f64 / n as f64);
                Ok(samples_for_kmedian(n, k, require(knobs.epsilon, "--epsilon or --samples")?, require(knobs.delta, "--delta")?, bound)?)
            })?;
            let mut report = if algo == KMedianAlgo::Search {
                kmedian::search_km(g, k, &r, exact.as_ref())?
            } else {
                kmedian::search_km_plus(g, k, &r, exact.as_ref())?
            };
            report.params.epsilon = knobs.epsilon;
            report.params.delta = knobs.delta;
            report
        }
        KMedianAlgo::Adaptive => {
            let exact = exact_for(g, knobs, caps)?;
            let mut opts = SamplingOptions::new(knobs.seed).with_max_samples(caps.max_samples);
            if let Some(o) = exact.as_ref() {
                opts = opts.with_exact(o);
            }
            kmedian::sampling_km(g, k, require(knobs.epsilon, "--epsilon")?, require(knobs.delta, "--delta")?, opts)?
        }
    };
    Ok(report)
}

pub(crate) fn solve_kcenter(g: &UncertainGraph, algo: KCenterAlgo, knobs: &SolveKnobs, caps: &Caps) -> Outcome<SolveReport> {
    let k = knobs.k;
    let n = g.node_count();
    let resolve = |rule| {
        KCenterEps::resolve(rule, knobs.epsilon, knobs.epsilon1, knobs.epsilon2, knobs.epsilon3, knobs.delta)
    };
    let report = match algo {
        KCenterAlgo::Gonzalez => {
            let o = ExactOracle::with_cap(g, caps.exact_cap)?;
            kcenter::gonzalez(g, k, o.table(), None)?
        }
        KCenterAlgo::Search => {
            let o = ExactOracle::with_cap(g, caps.exact_cap)?;
            kcenter::search_kc(g, k, &resolve(EpsRule::Search)?, o.table(), None)?
        }
        KCenterAlgo::GonzalezSampled => {
            let exact = exact_for(g, knobs, caps)?;
            let r = fixed_pool(g, knobs, caps, || {
                let eps = resolve(EpsRule::Guess)?;
                let bound = knobs.opt_bound.unwrap_or_else(|| g.edge_probability_product());
                Ok(samples_for_kcenter_simple(n, eps.epsilon1, eps.epsilon2, eps.delta.expect("resolved"), bound)?)
            })?;
            kcenter::search_kc_1(g, k, &r, exact.as_ref())?
        }
        KCenterAlgo::Guess | KCenterAlgo::SearchPlus => {
            let exact = exact_for(g, knobs, caps)?;
            let mut opts = SamplingOptions::new(knobs.seed).with_max_samples(caps.max_samples);
            if let Some(o) = exact.as_ref() {
                opts = opts.with_exact(o);
            }
            if algo == KCenterAlgo::Guess {
                kcenter::sampling_kc_1(g, k, &resolve(EpsRule::Guess)?, opts)?
            } else {
                kcenter::search_kc_plus(g, k, &resolve(EpsRule::SearchPlus)?, opts)?
            }
        }
    };
    Ok(report)
}
