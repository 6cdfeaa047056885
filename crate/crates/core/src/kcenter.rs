//! k-center solvers.
//!
//! `d(u, v) = -ln Pr[u ~ v]` is a metric on exact tables (connection
//! probabilities multiply along a middle node), so farthest-first traversal
//! in log space yields `KC >= OPT^2`. The bi-criteria searches instead
//! bisect on a threshold `q` and test it with greedy on the truncated
//! potential `L(q, C) = sum_v min(q, f_v(C))`, which reaches `nq` exactly
//! when every node is covered at level `q`.

use crate::bounds::{round_delta, samples_for_kcenter_bicriteria, samples_for_kcenter_guess};
use crate::error::{param, Error, Result};
use crate::exact::ExactOracle;
use crate::graph::{NodeId, UncertainGraph};
use crate::kmedian::{check_k, get_first_node_1, get_next_node, greedy_until, CoverageObjective, MarginalObjective, SamplingOptions};
use crate::report::{ObjectiveKind, RoundTrace, SolveParams, SolveReport};
use crate::sampling::{pr_hat, SampleSet};
use crate::signature::{assign_clusters, ClusteringSignature, Connectivity};

/// Which accuracy identity a parameter set must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpsRule {
    /// `1 - eps = (1 - eps1)(1 - eps2)`.
    Search,
    /// `eps = eps1 + eps2`.
    Guess,
    /// `1 - eps = (1 - eps1)(1 - eps2)(1 - eps3)`.
    SearchPlus,
}

/// Accuracy and confidence knobs of the k-center solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KCenterEps {
    pub epsilon: f64,
    pub epsilon1: f64,
    pub epsilon2: f64,
    /// Only used by the sampled bi-criteria search.
    pub epsilon3: Option<f64>,
    /// Unused by the oracle search.
    pub delta: Option<f64>,
}

const IDENTITY_TOL: f64 = 1e-9;

fn in_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(param(format!("{name} = {x} must lie in (0, 1)")))
    }
}

impl KCenterEps {
    pub fn search(epsilon1: f64, epsilon2: f64) -> Result<Self> {
        let e = KCenterEps { epsilon: 1.0 - (1.0 - epsilon1) * (1.0 - epsilon2), epsilon1, epsilon2, epsilon3: None, delta: None };
        e.validate(EpsRule::Search)?;
        Ok(e)
    }

    /// `eps1 = eps2 = 1 - sqrt(1 - eps)`.
    pub fn search_even(epsilon: f64) -> Result<Self> {
        in_unit("epsilon", epsilon)?;
        let e = 1.0 - (1.0 - epsilon).sqrt();
        Ok(KCenterEps { epsilon, ..Self::search(e, e)? })
    }

    pub fn guess(epsilon1: f64, epsilon2: f64, delta: f64) -> Result<Self> {
        let e = KCenterEps { epsilon: epsilon1 + epsilon2, epsilon1, epsilon2, epsilon3: None, delta: Some(delta) };
        e.validate(EpsRule::Guess)?;
        Ok(e)
    }

    /// `eps1 = eps2 = eps / 2`.
    pub fn guess_even(epsilon: f64, delta: f64) -> Result<Self> {
        in_unit("epsilon", epsilon)?;
        Ok(KCenterEps { epsilon, ..Self::guess(epsilon / 2.0, epsilon / 2.0, delta)? })
    }

    pub fn search_plus(epsilon1: f64, epsilon2: f64, epsilon3: f64, delta: f64) -> Result<Self> {
        let epsilon = 1.0 - (1.0 - epsilon1) * (1.0 - epsilon2) * (1.0 - epsilon3);
        let e = KCenterEps { epsilon, epsilon1, epsilon2, epsilon3: Some(epsilon3), delta: Some(delta) };
        e.validate(EpsRule::SearchPlus)?;
        Ok(e)
    }

    /// `eps1 = eps2 = eps3 = 1 - (1 - eps)^(1/3)`.
    pub fn search_plus_even(epsilon: f64, delta: f64) -> Result<Self> {
        in_unit("epsilon", epsilon)?;
        let e = 1.0 - (1.0 - epsilon).cbrt();
        Ok(KCenterEps { epsilon, ..Self::search_plus(e, e, e, delta)? })
    }

    /// Builds a parameter set from whatever the caller supplied: the
    /// missing side of the identity is derived, an even split is used when
    /// only `epsilon` is given, and a fully specified set is checked.
    pub fn resolve(
        rule: EpsRule,
        epsilon: Option<f64>,
        epsilon1: Option<f64>,
        epsilon2: Option<f64>,
        epsilon3: Option<f64>,
        delta: Option<f64>,
    ) -> Result<Self> {
        let need_delta = || delta.ok_or_else(|| param("delta is required"));
        let parts = (epsilon1, epsilon2, epsilon3);
        let derived = match (rule, parts) {
            (EpsRule::Search, (Some(a), Some(b), None)) => Self::search(a, b)?,
            (EpsRule::Search, (None, None, None)) => {
                Self::search_even(epsilon.ok_or_else(|| param("epsilon or epsilon1/epsilon2 is required"))?)?
            }
            (EpsRule::Guess, (Some(a), Some(b), None)) => Self::guess(a, b, need_delta()?)?,
            (EpsRule::Guess, (None, None, None)) => {
                Self::guess_even(epsilon.ok_or_else(|| param("epsilon or epsilon1/epsilon2 is required"))?, need_delta()?)?
            }
            (EpsRule::SearchPlus, (Some(a), Some(b), Some(c))) => Self::search_plus(a, b, c, need_delta()?)?,
            (EpsRule::SearchPlus, (None, None, None)) => Self::search_plus_even(
                epsilon.ok_or_else(|| param("epsilon or epsilon1/epsilon2/epsilon3 is required"))?,
                need_delta()?,
            )?,
            _ => return Err(param("supply either epsilon alone or every epsilon_i the algorithm uses")),
        };
        if let Some(e) = epsilon {
            if (e - derived.epsilon).abs() > IDENTITY_TOL {
                return Err(param(format!(
                    "epsilon = {e} does not match the value {} implied by epsilon_i",
                    derived.epsilon
                )));
            }
        }
        Ok(derived)
    }

    /// Checks ranges and the identity of `rule` to within `1e-9`.
    pub fn validate(&self, rule: EpsRule) -> Result<()> {
        in_unit("epsilon", self.epsilon)?;
        in_unit("epsilon1", self.epsilon1)?;
        in_unit("epsilon2", self.epsilon2)?;
        if let Some(d) = self.delta {
            in_unit("delta", d)?;
        }
        let (e, e1, e2) = (self.epsilon, self.epsilon1, self.epsilon2);
        let gap = match rule {
            EpsRule::Search => (1.0 - e) - (1.0 - e1) * (1.0 - e2),
            EpsRule::Guess => e - (e1 + e2),
            EpsRule::SearchPlus => {
                let e3 = self.epsilon3.ok_or_else(|| param("epsilon3 is required"))?;
                in_unit("epsilon3", e3)?;
                (1.0 - e) - (1.0 - e1) * (1.0 - e2) * (1.0 - e3)
            }
        };
        if gap.abs() > IDENTITY_TOL {
            return Err(param(format!("accuracy parameters violate the {rule:?} identity by {gap:e}")));
        }
        if rule != EpsRule::Search && self.delta.is_none() {
            return Err(param("delta is required"));
        }
        Ok(())
    }

    /// `ceil(ln(n / eps1)) * k`, the center budget of the bi-criteria searches.
    pub fn center_budget(&self, n: usize, k: usize) -> usize {
        ((n as f64 / self.epsilon1).ln().ceil().max(1.0) as usize) * k
    }

    fn params(&self, k: usize, seed: Option<u64>) -> SolveParams {
        SolveParams {
            k,
            epsilon: Some(self.epsilon),
            epsilon1: Some(self.epsilon1),
            epsilon2: Some(self.epsilon2),
            epsilon3: self.epsilon3,
            delta: self.delta,
            seed,
            samples: None,
        }
    }
}

/// `-ln p`, with `p = 0` at infinite distance.
pub fn log_distance(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(param(format!("probability {p} outside [0, 1]")));
    }
    Ok(if p == 0.0 { f64::INFINITY } else { -p.ln() + 0.0 })
}

/// Gonzalez from the minimum-ID node. `d_v(C) = -ln max_{c in C} Pr[c ~ v]`
/// is compared through the raw maximum, which orders identically and
/// avoids rounding ties.
fn farthest_first<C: Connectivity + ?Sized>(table: &C, k: usize) -> Vec<NodeId> {
    let n = table.node_count();
    let mut centers = vec![NodeId::from_index(0)];
    let mut closest = table.raw_row(centers[0]).into_owned();
    let mut chosen = vec![false; n];
    chosen[0] = true;
    while centers.len() < k {
        let mut far: Option<usize> = None;
        for v in 0..n {
            if !chosen[v] && far.map_or(true, |f| closest[v] < closest[f]) {
                far = Some(v);
            }
        }
        let v = far.expect("k <= n");
        chosen[v] = true;
        let c = NodeId::from_index(v);
        centers.push(c);
        for (b, &r) in closest.iter_mut().zip(table.raw_row(c).iter()) {
            if r > *b {
                *b = r;
            }
        }
    }
    centers
}

/// Farthest-first traversal on a total table; `KC >= OPT^2` when the table
/// is exact.
pub fn gonzalez<C: Connectivity + ?Sized>(
    g: &UncertainGraph,
    k: usize,
    table: &C,
    exact: Option<&ExactOracle>,
) -> Result<SolveReport> {
    check_k(g, k)?;
    if table.node_count() != g.node_count() {
        return Err(Error::InvalidGraph(format!("table covers {} nodes, graph has {}", table.node_count(), g.node_count())));
    }
    let centers = farthest_first(table, k);
    let sig = assign_clusters(table, &centers)?;
    SolveReport::build("gonzalez", SolveParams { k, ..Default::default() }, g, centers, sig, table, ObjectiveKind::Kc, exact)
}

/// Gonzalez on estimated distances `-ln pr_hat`; pairs never connected in
/// `r` are infinitely far.
pub fn search_kc_1(g: &UncertainGraph, k: usize, r: &SampleSet, exact: Option<&ExactOracle>) -> Result<SolveReport> {
    check_k(g, k)?;
    if r.is_empty() {
        return Err(Error::EmptySamples);
    }
    r.check_graph(g)?;
    let mut report = gonzalez(g, k, r, exact)?;
    report.algorithm = "gonzalez-sampled".into();
    report.params.seed = r.seed();
    report.params.samples = Some(r.len());
    report.samples.insert("selection".into(), r.len());
    Ok(report)
}

/// Bisection interval of the threshold searches.
#[derive(Clone, Debug, PartialEq)]
pub struct BinarySearchState {
    /// Largest threshold certified feasible.
    pub q1: f64,
    /// Smallest threshold judged infeasible, or 1.
    pub q2: f64,
    pub q: f64,
    /// Centers of the last feasible test.
    pub best_centers: Vec<NodeId>,
    pub iteration: usize,
}

impl Default for BinarySearchState {
    fn default() -> Self {
        BinarySearchState { q1: 0.0, q2: 1.0, q: 0.5, best_centers: Vec::new(), iteration: 0 }
    }
}

impl BinarySearchState {
    /// Advances to the next iteration and returns its midpoint.
    pub fn next_midpoint(&mut self) -> f64 {
        self.iteration += 1;
        self.q = (self.q1 + self.q2) / 2.0;
        self.q
    }

    pub fn record(&mut self, feasible: bool, centers: Vec<NodeId>) {
        if feasible {
            self.q1 = self.q;
            self.best_centers = centers;
        } else {
            self.q2 = self.q;
        }
    }

    /// `q1 >= (1 - eps2) q2`.
    pub fn converged(&self, epsilon2: f64) -> bool {
        self.q1 >= (1.0 - epsilon2) * self.q2
    }

    /// Nothing feasible yet and the interval has sunk below a known lower
    /// bound on the optimum; the search cannot make progress.
    pub fn below_floor(&self, floor: f64) -> bool {
        self.q1 == 0.0 && self.q2 < floor
    }
}

fn search_floor(g: &UncertainGraph) -> f64 {
    g.edge_probability_product().max(f64::MIN_POSITIVE)
}

/// `(n - eps1) q` in raw units, with a relative slack for rounding in the
/// summed potential.
fn potential_target(n: usize, epsilon1: f64, q: f64, scale: f64) -> f64 {
    (n as f64 - epsilon1) * q * scale * (1.0 - 1e-12)
}

/// Bi-criteria threshold search on a total table. Returns up to
/// `ceil(ln(n/eps1)) k` centers with `KC >= (1 - eps) OPT` when the table
/// is exact.
pub fn search_kc<C: Connectivity + ?Sized>(
    g: &UncertainGraph,
    k: usize,
    eps: &KCenterEps,
    table: &C,
    exact: Option<&ExactOracle>,
) -> Result<SolveReport> {
    check_k(g, k)?;
    eps.validate(EpsRule::Search)?;
    if table.node_count() != g.node_count() {
        return Err(Error::InvalidGraph(format!("table covers {} nodes, graph has {}", table.node_count(), g.node_count())));
    }
    let n = g.node_count();
    let budget = eps.center_budget(n, k);
    let floor = search_floor(g);
    let all: Vec<NodeId> = g.nodes().collect();
    let mut state = BinarySearchState::default();
    let mut rounds = Vec::new();
    let mut evaluations = 0;
    let mut last: Vec<NodeId>;
    let mut certified = true;
    loop {
        let q = state.next_midpoint();
        let mut obj = CoverageObjective::truncated(table, q);
        let target = potential_target(n, eps.epsilon1, q, obj.scale());
        let run = greedy_until(&all, budget + 1, &mut obj, |o| o.value() >= target);
        evaluations += run.evaluations;
        let feasible = run.selected.len() <= budget;
        rounds.push(RoundTrace {
            round: state.iteration,
            samples: 0,
            q: Some(q),
            feasible: Some(feasible),
            centers: Some(run.selected.len()),
            estimate: Some(obj.scaled_value()),
            ..Default::default()
        });
        last = run.selected.clone();
        state.record(feasible, run.selected);
        let r = rounds.last_mut().expect("pushed");
        r.q1 = Some(state.q1);
        r.q2 = Some(state.q2);
        if state.converged(eps.epsilon2) {
            break;
        }
        if state.below_floor(floor) {
            certified = false;
            break;
        }
    }
    let centers = if state.best_centers.is_empty() {
        last.truncate(budget);
        last
    } else {
        state.best_centers.clone()
    };
    let sig = assign_clusters(table, &centers)?;
    let mut report = SolveReport::build("search", eps.params(k, None), g, centers, sig, table, ObjectiveKind::Kc, exact)?;
    report.certificate.q1 = Some(state.q1);
    report.certificate.q2 = Some(state.q2);
    report.certificate.certified = certified;
    report.center_budget = Some(budget);
    report.evaluations = Some(evaluations);
    report.rounds = rounds;
    Ok(report)
}

/// One round of the OPT-guessing loop.
#[derive(Clone, Debug, PartialEq)]
pub struct GuessState {
    pub round: usize,
    /// `2^-round`.
    pub q: f64,
    pub delta: f64,
    /// Lower confidence bound of every non-self link, from the validation pool.
    pub z: Vec<(NodeId, NodeId, f64)>,
}

impl GuessState {
    pub fn new(round: usize, delta: f64) -> Self {
        GuessState { round, q: 0.5f64.powi(round as i32), delta: round_delta(delta, round), z: Vec::new() }
    }

    /// `min z`, or `+inf` when every node is a center.
    pub fn min_z(&self) -> f64 {
        self.z.iter().map(|x| x.2).fold(f64::INFINITY, f64::min)
    }

    pub fn accepted(&self) -> bool {
        self.min_z() >= self.q
    }
}

/// `(sqrt(p) - sqrt(a / 6t))^2 - a / 6t`. The caller guarantees `p` is the
/// estimate behind the bound; the result never exceeds `p`.
pub fn z_lower_bound(p_hat: f64, a: f64, theta: usize) -> f64 {
    let c = a / (6.0 * theta as f64);
    let z = (p_hat.sqrt() - c.sqrt()).powi(2) - c;
    z.min(p_hat)
}

fn check_budget(requested: usize, opts: &SamplingOptions<'_>) -> Result<()> {
    if requested > opts.max_samples {
        return Err(Error::SampleBudget { requested, budget: opts.max_samples });
    }
    Ok(())
}

/// Guesses `OPT = 2^-i` for `i = 1, 2, ...`, runs sampled Gonzalez at the
/// matching pool size, and stops once an equal-size fresh pool certifies
/// every link at level `q`.
pub fn sampling_kc_1(g: &UncertainGraph, k: usize, eps: &KCenterEps, opts: SamplingOptions<'_>) -> Result<SolveReport> {
    check_k(g, k)?;
    eps.validate(EpsRule::Guess)?;
    let delta = eps.delta.expect("validated");
    let n = g.node_count();
    let mut r = SampleSet::generate(g, opts.seed, 0);
    let mut validation: Option<SampleSet> = None;
    let mut rounds = Vec::new();
    for i in 1.. {
        let mut guess = GuessState::new(i, delta);
        if let Some(v) = validation.take() {
            r.absorb(v)?;
        }
        let ell = samples_for_kcenter_guess(n, eps.epsilon1, eps.epsilon2, guess.delta, guess.q)?;
        check_budget(ell.max(r.len()), &opts)?;
        r.grow_to(g, ell)?;
        let mut report = search_kc_1(g, k, &r, opts.exact)?;
        let v = r.next_block(g, r.len())?;
        let a = (2.0 * (n - k) as f64 / guess.delta).ln();
        for (c, u) in report.signature.links() {
            if c != u {
                guess.z.push((c, u, z_lower_bound(pr_hat(&v, c, u)?, a, v.len())));
            }
        }
        let z_min = guess.min_z();
        rounds.push(RoundTrace {
            round: i,
            samples: r.len(),
            q: Some(guess.q),
            delta: Some(guess.delta),
            z_min: z_min.is_finite().then_some(z_min),
            ..Default::default()
        });
        if guess.accepted() {
            report.algorithm = "guess".into();
            report.params = eps.params(k, Some(opts.seed));
            report.certificate.q = Some(guess.q);
            report.certificate.z_min = z_min.is_finite().then_some(z_min);
            report.samples.insert("validation".into(), v.len());
            report.rounds = rounds;
            return Ok(report);
        }
        validation = Some(v);
    }
    unreachable!()
}

/// Bi-criteria threshold search on a growing sample pool, with lazily
/// refreshed gains. Each feasibility test at `q` uses the pool size that
/// makes a wrong answer unlikely at confidence `6 delta / (pi^2 i^2)`.
pub fn search_kc_plus(g: &UncertainGraph, k: usize, eps: &KCenterEps, opts: SamplingOptions<'_>) -> Result<SolveReport> {
    check_k(g, k)?;
    eps.validate(EpsRule::SearchPlus)?;
    let delta = eps.delta.expect("validated");
    let e3 = eps.epsilon3.expect("validated");
    let n = g.node_count();
    let budget = eps.center_budget(n, k);
    let floor = search_floor(g);
    let mut r = SampleSet::generate(g, opts.seed, 0);
    let mut state = BinarySearchState::default();
    let mut best: Option<ClusteringSignature> = None;
    let mut last: Vec<NodeId>;
    let mut rounds = Vec::new();
    let mut evaluations = 0;
    let mut certified = true;
    loop {
        let q = state.next_midpoint();
        let delta_i = round_delta(delta, state.iteration);
        let ell = samples_for_kcenter_bicriteria(n, k, e3, eps.epsilon, delta_i, q)?;
        check_budget(ell.max(r.len()), &opts)?;
        if r.len() < ell {
            r.grow_to(g, ell)?;
        }
        let q_low = (1.0 - e3) * q;
        let mut obj = CoverageObjective::truncated(&r, q_low);
        let target = potential_target(n, eps.epsilon1, q_low, obj.scale());
        let (u, mut lazy) = get_first_node_1(&r, &obj)?;
        obj.insert(u);
        while obj.value() < target && lazy.selected().len() < budget {
            let u = get_next_node(&mut lazy, &obj)?;
            obj.insert(u);
        }
        evaluations += lazy.evaluations();
        let centers = lazy.selected().to_vec();
        let feasible = centers.len() <= budget && obj.value() >= target;
        rounds.push(RoundTrace {
            round: state.iteration,
            samples: r.len(),
            q: Some(q),
            delta: Some(delta_i),
            feasible: Some(feasible),
            centers: Some(centers.len()),
            estimate: Some(obj.scaled_value()),
            ..Default::default()
        });
        if feasible {
            best = Some(assign_clusters(&r, &centers)?);
        }
        last = centers.clone();
        state.record(feasible, centers);
        let t = rounds.last_mut().expect("pushed");
        t.q1 = Some(state.q1);
        t.q2 = Some(state.q2);
        if state.converged(eps.epsilon2) {
            break;
        }
        if state.below_floor(floor) {
            certified = false;
            break;
        }
    }
    let (centers, sig) = match best {
        Some(sig) => (state.best_centers.clone(), sig),
        None => (last.clone(), assign_clusters(&r, &last)?),
    };
    let mut report = SolveReport::build(
        "search-plus",
        eps.params(k, Some(opts.seed)),
        g,
        centers,
        sig,
        &r,
        ObjectiveKind::Kc,
        opts.exact,
    )?;
    report.certificate.q1 = Some(state.q1);
    report.certificate.q2 = Some(state.q2);
    report.certificate.certified = certified;
    report.center_budget = Some(budget);
    report.evaluations = Some(evaluations);
    report.samples.insert("total".into(), r.len());
    report.rounds = rounds;
    Ok(report)
}
