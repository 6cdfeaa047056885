//! k-median solvers.
//!
//! For a center set `C`, the best clustering links every node to its best
//! connected center, so maximizing KM reduces to maximizing the monotone
//! submodular coverage `F(C) = sum_v max_{c in C} Pr[c ~ v]` over k-subsets.

mod greedy;

pub use greedy::{
    get_first_node, get_first_node_1, get_next_node, greedy, lazy_greedy, CoverageObjective, GreedyRun, LazyState,
    MarginalObjective, SetFunction,
};
pub(crate) use greedy::greedy_until;

use std::f64::consts::E;

use crate::bounds::{kmedian_sample_size, to_count};
use crate::error::{param, Error, Result};
use crate::exact::ExactOracle;
use crate::graph::{NodeId, UncertainGraph};
use crate::report::{ObjectiveKind, RoundTrace, SolveParams, SolveReport};
use crate::sampling::{derive_seed, km_hat, SampleSet};
use crate::signature::{assign_clusters, coverage_value};

/// `1 - 1/e`.
pub const GREEDY_RATIO: f64 = 1.0 - 1.0 / E;

/// Knobs shared by the sampling solvers.
#[derive(Clone, Copy, Debug)]
pub struct SamplingOptions<'a> {
    pub seed: u64,
    /// Scores the result exactly when present.
    pub exact: Option<&'a ExactOracle>,
    /// Refuse to hold more worlds than this in any one pool.
    pub max_samples: usize,
}

impl<'a> SamplingOptions<'a> {
    pub fn new(seed: u64) -> Self {
        SamplingOptions { seed, exact: None, max_samples: 50_000_000 }
    }

    pub fn with_exact(mut self, oracle: &'a ExactOracle) -> Self {
        self.exact = Some(oracle);
        self
    }

    pub fn with_max_samples(mut self, max: usize) -> Self {
        self.max_samples = max;
        self
    }
}

pub(crate) fn check_k(g: &UncertainGraph, k: usize) -> Result<()> {
    if k == 0 {
        return Err(param("k must be at least 1"));
    }
    if k > g.node_count() {
        return Err(Error::TooManyCenters { k, available: g.node_count() });
    }
    Ok(())
}

/// Greedy on exact coverage; `KM >= (1 - 1/e) OPT`.
pub fn solve_kmedian_oracle(g: &UncertainGraph, k: usize, oracle: &ExactOracle) -> Result<SolveReport> {
    check_k(g, k)?;
    let table = oracle.table();
    let all: Vec<NodeId> = g.nodes().collect();
    let mut obj = CoverageObjective::coverage(table);
    let run = greedy(&all, k, &mut obj)?;
    let sig = assign_clusters(table, &run.selected)?;
    let params = SolveParams { k, ..Default::default() };
    let mut report =
        SolveReport::build("oracle-greedy", params, g, run.selected, sig, table, ObjectiveKind::Km, Some(oracle))?;
    report.certificate.coverage = Some(obj.scaled_value());
    report.certificate.ratio = Some(GREEDY_RATIO);
    report.evaluations = Some(run.evaluations);
    Ok(report)
}

/// Top-k nodes by total connectivity `sum_v Pr[u ~ v]`. The modular
/// surrogate is solved exactly and guarantees `F(C) / n >= OPT / k`.
pub fn solve_kmd2_baseline(g: &UncertainGraph, k: usize, oracle: &ExactOracle) -> Result<SolveReport> {
    check_k(g, k)?;
    let table = oracle.table();
    let mut sums: Vec<(NodeId, f64)> = g.nodes().map(|u| (u, table.row(u).iter().sum())).collect();
    sums.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let centers: Vec<NodeId> = sums[..k].iter().map(|x| x.0).collect();
    let sig = assign_clusters(table, &centers)?;
    let coverage = coverage_value(table, &centers)?;
    let params = SolveParams { k, ..Default::default() };
    let mut report = SolveReport::build("kmd2", params, g, centers, sig, table, ObjectiveKind::Km, Some(oracle))?;
    report.certificate.coverage = Some(coverage);
    report.certificate.ratio = Some(1.0 / k as f64);
    Ok(report)
}

fn sampled_report(
    name: &str,
    g: &UncertainGraph,
    k: usize,
    r: &SampleSet,
    centers: Vec<NodeId>,
    evaluations: usize,
    exact: Option<&ExactOracle>,
) -> Result<SolveReport> {
    let sig = assign_clusters(r, &centers)?;
    let coverage = coverage_value(r, &centers)?;
    let params = SolveParams { k, seed: r.seed(), samples: Some(r.len()), ..Default::default() };
    let mut report = SolveReport::build(name, params, g, centers, sig, r, ObjectiveKind::Km, exact)?;
    report.certificate.coverage = Some(coverage);
    report.evaluations = Some(evaluations);
    report.samples.insert("selection".into(), r.len());
    Ok(report)
}

fn check_samples(g: &UncertainGraph, r: &SampleSet) -> Result<()> {
    if r.is_empty() {
        return Err(Error::EmptySamples);
    }
    r.check_graph(g)
}

/// Greedy on the estimated coverage over a fixed sample set, then links
/// nodes by estimated connectivity.
pub fn search_km(g: &UncertainGraph, k: usize, r: &SampleSet, exact: Option<&ExactOracle>) -> Result<SolveReport> {
    check_k(g, k)?;
    check_samples(g, r)?;
    let all: Vec<NodeId> = g.nodes().collect();
    let mut obj = CoverageObjective::coverage(r);
    let run = greedy(&all, k, &mut obj)?;
    sampled_report("search", g, k, r, run.selected, run.evaluations, exact)
}

/// Same selection as [`search_km`], with lazily refreshed gain bounds
/// seeded from component sizes.
pub fn search_km_plus(g: &UncertainGraph, k: usize, r: &SampleSet, exact: Option<&ExactOracle>) -> Result<SolveReport> {
    check_k(g, k)?;
    check_samples(g, r)?;
    let mut obj = CoverageObjective::coverage(r);
    let (u, mut state) = get_first_node(r)?;
    obj.insert(u);
    lazy_greedy(&mut state, k, &mut obj)?;
    let evaluations = state.evaluations();
    sampled_report("search-plus", g, k, r, state.selected().to_vec(), evaluations, exact)
}

/// Confidence bounds of one adaptive round.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptiveBounds {
    /// `ln(3 i_max / delta)`.
    pub a: f64,
    /// Size of the selection pool.
    pub theta: usize,
    /// Lower bound on the KM of the returned clustering.
    pub lb: f64,
    /// Upper bound on the optimal KM.
    pub ub: f64,
    pub i_max: usize,
}

impl AdaptiveBounds {
    /// `lb = (sqrt(km_val) - sqrt(a/6t))^2 - a/6t` from the validation pool and
    /// `ub = (sqrt(km_sel / (1 - 1/e) + 2a/3t) + sqrt(a/6t))^2 - a/6t` from the
    /// selection pool; `lb` is clamped to `[0, 1]` and `ub` to `[lb, inf)`.
    pub fn compute(km_selection: f64, km_validation: f64, theta: usize, i_max: usize, delta: f64) -> Self {
        let a = (3.0 * i_max as f64 / delta).ln();
        let t = theta as f64;
        let c = a / (6.0 * t);
        let lb = (km_validation.sqrt() - c.sqrt()).powi(2) - c;
        let ub = ((km_selection / GREEDY_RATIO + 2.0 * a / (3.0 * t)).sqrt() + c.sqrt()).powi(2) - c;
        let lb = lb.clamp(0.0, 1.0);
        let ub = ub.max(lb);
        AdaptiveBounds { a, theta, lb, ub, i_max }
    }

    pub fn ratio(&self) -> f64 {
        if self.ub > 0.0 {
            self.lb / self.ub
        } else {
            0.0
        }
    }
}

/// Initial pool size and round cap of the adaptive solver.
pub fn adaptive_schedule(n: usize, k: usize, epsilon: f64, delta: f64) -> Result<(usize, usize, usize)> {
    let opt_lb = k as f64 / n as f64;
    let t_max_real = kmedian_sample_size(n, k, epsilon, delta, opt_lb)?;
    let t_max = to_count(t_max_real)?;
    let t0 = to_count(t_max_real * epsilon * epsilon * k as f64 / n as f64)?;
    let i_max = ((t_max as f64 / t0 as f64).log2().ceil() as usize).max(1);
    Ok((t_max, t0, i_max))
}

/// Adaptive sampling: doubles a selection pool and an independent
/// validation pool until the certified ratio `lb / ub` reaches
/// `1 - 1/e - eps`, or the round cap is hit.
pub fn sampling_km(g: &UncertainGraph, k: usize, epsilon: f64, delta: f64, opts: SamplingOptions<'_>) -> Result<SolveReport> {
    check_k(g, k)?;
    if !(epsilon > 0.0 && epsilon < GREEDY_RATIO) {
        return Err(param(format!("epsilon = {epsilon} must lie in (0, 1 - 1/e)")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(param(format!("delta = {delta} must lie in (0, 1)")));
    }
    let n = g.node_count();
    let (t_max, t0, i_max) = adaptive_schedule(n, k, epsilon, delta)?;
    let target = GREEDY_RATIO - epsilon;
    let mut r1 = SampleSet::generate(g, derive_seed(opts.seed, 1), 0);
    let mut r2 = SampleSet::generate(g, derive_seed(opts.seed, 2), 0);
    let mut rounds = Vec::new();
    for i in 1..=i_max {
        let size = t0 << (i - 1);
        if size > opts.max_samples {
            return Err(Error::SampleBudget { requested: size, budget: opts.max_samples });
        }
        r1.grow_to(g, size)?;
        r2.grow_to(g, size)?;
        let mut report = search_km(g, k, &r1, opts.exact)?;
        let km1 = report.km;
        let km2 = km_hat(&r2, &report.signature)?;
        let b = AdaptiveBounds::compute(km1, km2, r1.len(), i_max, delta);
        rounds.push(RoundTrace {
            round: i,
            samples: r1.len(),
            estimate: Some(km1),
            validation_estimate: Some(km2),
            lb: Some(b.lb),
            ub: Some(b.ub),
            ..Default::default()
        });
        let passed = b.ratio() >= target;
        if passed || i == i_max {
            report.algorithm = "adaptive".into();
            report.params.epsilon = Some(epsilon);
            report.params.delta = Some(delta);
            report.params.seed = Some(opts.seed);
            report.params.samples = None;
            report.certificate.lb = Some(b.lb);
            report.certificate.ub = Some(b.ub);
            report.certificate.ratio = Some(target);
            report.certificate.opt_lower_bound = Some(k as f64 / n as f64);
            report.certificate.certified = passed;
            report.samples.clear();
            report.samples.insert("selection".into(), r1.len());
            report.samples.insert("validation".into(), r2.len());
            report.samples.insert("t_max".into(), t_max);
            report.rounds = rounds;
            return Ok(report);
        }
    }
    unreachable!("the last round always returns")
}
