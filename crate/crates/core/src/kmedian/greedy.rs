//! Greedy maximization of monotone submodular set functions, eager and lazy.
//!
//! Both variants pick, at every step, the candidate with the largest
//! marginal gain and break ties by the smallest node ID, so they select the
//! same sets whenever gains are evaluated the same way.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::sampling::SampleSet;
use crate::signature::Connectivity;

/// A set function that can report marginal gains against a growing set `C`.
pub trait MarginalObjective {
    /// `g(C + u) - g(C)` for the current `C`.
    fn gain(&self, u: NodeId) -> f64;

    /// Adds `u` to `C`.
    fn insert(&mut self, u: NodeId);

    /// `g(C)`.
    fn value(&self) -> f64;
}

/// `sum_v min(cap, max_{c in C} conn(c, v))` in the raw units of `conn`.
///
/// With an infinite cap this is the coverage `F(C)` (or its estimate); with
/// a finite cap it is the truncated potential `L(q, C)`.
pub struct CoverageObjective<'a, C: Connectivity + ?Sized> {
    conn: &'a C,
    cap: f64,
    best: Vec<f64>,
    selected: Vec<NodeId>,
}

impl<'a, C: Connectivity + ?Sized> CoverageObjective<'a, C> {
    pub fn coverage(conn: &'a C) -> Self {
        Self::with_cap(conn, f64::INFINITY)
    }

    /// Truncated at probability `q`.
    pub fn truncated(conn: &'a C, q: f64) -> Self {
        Self::with_cap(conn, q * conn.scale())
    }

    fn with_cap(conn: &'a C, cap: f64) -> Self {
        CoverageObjective { conn, cap, best: vec![0.0; conn.node_count()], selected: Vec::new() }
    }

    /// Raw units per unit of probability.
    pub fn scale(&self) -> f64 {
        self.conn.scale()
    }

    pub fn selected(&self) -> &[NodeId] {
        &self.selected
    }

    /// `g(C)` in probability units.
    pub fn scaled_value(&self) -> f64 {
        self.value() / self.scale()
    }
}

impl<C: Connectivity + ?Sized> MarginalObjective for CoverageObjective<'_, C> {
    fn gain(&self, u: NodeId) -> f64 {
        let row = self.conn.raw_row(u);
        row.iter()
            .zip(&self.best)
            .map(|(&r, &b)| (r.min(self.cap) - b.min(self.cap)).max(0.0))
            .sum()
    }

    fn insert(&mut self, u: NodeId) {
        let row = self.conn.raw_row(u);
        for (b, &r) in self.best.iter_mut().zip(row.iter()) {
            if r > *b {
                *b = r;
            }
        }
        self.selected.push(u);
    }

    fn value(&self) -> f64 {
        self.best.iter().map(|&b| b.min(self.cap)).sum()
    }
}

/// Adapts a plain set function `g(&[NodeId]) -> f64`.
pub struct SetFunction<F> {
    f: F,
    selected: Vec<NodeId>,
    current: f64,
}

impl<F: Fn(&[NodeId]) -> f64> SetFunction<F> {
    pub fn new(f: F) -> Self {
        let current = f(&[]);
        SetFunction { f, selected: Vec::new(), current }
    }
}

impl<F: Fn(&[NodeId]) -> f64> MarginalObjective for SetFunction<F> {
    fn gain(&self, u: NodeId) -> f64 {
        let mut with = self.selected.clone();
        with.push(u);
        (self.f)(&with) - self.current
    }

    fn insert(&mut self, u: NodeId) {
        self.selected.push(u);
        self.current = (self.f)(&self.selected);
    }

    fn value(&self) -> f64 {
        self.current
    }
}

/// Outcome of a greedy run.
#[derive(Clone, Debug, PartialEq)]
pub struct GreedyRun {
    /// Nodes in selection order.
    pub selected: Vec<NodeId>,
    /// Marginal gain of each selected node when it was picked.
    pub gains: Vec<f64>,
    /// Number of marginal-gain evaluations.
    pub evaluations: usize,
}

/// Picks `k` nodes of `universe`, each time the one with the largest
/// marginal gain (smallest ID on ties). Selected nodes are inserted into
/// `obj`.
pub fn greedy<O: MarginalObjective + ?Sized>(universe: &[NodeId], k: usize, obj: &mut O) -> Result<GreedyRun> {
    let mut pool = universe.to_vec();
    pool.sort_unstable();
    pool.dedup();
    if k > pool.len() {
        return Err(Error::TooManyCenters { k, available: pool.len() });
    }
    let mut run = GreedyRun { selected: Vec::with_capacity(k), gains: Vec::with_capacity(k), evaluations: 0 };
    while run.selected.len() < k {
        let (pos, gain) = best_candidate(&pool, obj, &mut run.evaluations);
        let u = pool.remove(pos);
        obj.insert(u);
        run.selected.push(u);
        run.gains.push(gain);
    }
    Ok(run)
}

fn best_candidate<O: MarginalObjective + ?Sized>(pool: &[NodeId], obj: &O, evaluations: &mut usize) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &u) in pool.iter().enumerate() {
        let g = obj.gain(u);
        *evaluations += 1;
        if g > best.1 {
            best = (i, g);
        }
    }
    best
}

/// Lazy-greedy bookkeeping: candidates with upper bounds on their marginal
/// gains, kept in non-increasing bound order.
#[derive(Clone, Debug, PartialEq)]
pub struct LazyState {
    list: Vec<(NodeId, f64)>,
    selected: Vec<NodeId>,
    evaluations: usize,
}

/// Higher bound first, then smaller ID.
fn rank(a: &(NodeId, f64), b: &(NodeId, f64)) -> Ordering {
    b.1.total_cmp(&a.1).then(a.0.cmp(&b.0))
}

impl LazyState {
    /// Starts from explicit upper bounds, e.g. singleton values.
    pub fn from_bounds(bounds: Vec<(NodeId, f64)>) -> Self {
        let mut list = bounds;
        list.sort_by(rank);
        LazyState { list, selected: Vec::new(), evaluations: 0 }
    }

    /// Remaining candidates with their cached bounds, best first.
    pub fn remaining(&self) -> &[(NodeId, f64)] {
        &self.list
    }

    pub fn selected(&self) -> &[NodeId] {
        &self.selected
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    fn pop_head(&mut self) -> Result<(NodeId, f64)> {
        if self.list.is_empty() {
            return Err(Error::TooManyCenters { k: self.selected.len() + 1, available: self.selected.len() });
        }
        let head = self.list.remove(0);
        self.selected.push(head.0);
        Ok(head)
    }
}

/// Bounds `UB(v) = F_hat(R, {v})` for every node, from one pass over the
/// component sizes of each world; pops the best node.
pub fn get_first_node(r: &SampleSet) -> Result<(NodeId, LazyState)> {
    let mut state = first_node_bounds(r)?;
    let (u, _) = state.pop_head()?;
    Ok((u, state))
}

fn first_node_bounds(r: &SampleSet) -> Result<LazyState> {
    if r.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut ub = vec![0u64; r.node_count()];
    for w in r.worlds() {
        let sizes = w.component_sizes();
        for (b, &l) in ub.iter_mut().zip(w.labels()) {
            *b += sizes[l as usize] as u64;
        }
    }
    Ok(LazyState::from_bounds(
        ub.into_iter().enumerate().map(|(v, b)| (NodeId::from_index(v), b as f64)).collect(),
    ))
}

/// Refreshes bounds from the head of the list until the refreshed entry
/// outranks the next cached bound, re-sorts, and pops the head. The popped
/// node maximizes the true marginal gain of `obj` (smallest ID on ties).
/// The caller inserts it into `obj`.
pub fn get_next_node<O: MarginalObjective + ?Sized>(state: &mut LazyState, obj: &O) -> Result<NodeId> {
    let len = state.list.len();
    for i in 0..len {
        let u = state.list[i].0;
        state.list[i].1 = obj.gain(u);
        state.evaluations += 1;
        if i + 1 == len || rank(&state.list[i], &state.list[i + 1]) == Ordering::Less {
            break;
        }
    }
    state.list.sort_by(rank);
    Ok(state.pop_head()?.0)
}

/// Like [`greedy`] but stops as soon as `stop(obj)` holds or `limit` nodes
/// are selected, whichever comes first.
pub(crate) fn greedy_until<O, S>(universe: &[NodeId], limit: usize, obj: &mut O, stop: S) -> GreedyRun
where
    O: MarginalObjective + ?Sized,
    S: Fn(&O) -> bool,
{
    let mut pool = universe.to_vec();
    pool.sort_unstable();
    pool.dedup();
    let mut run = GreedyRun { selected: Vec::new(), gains: Vec::new(), evaluations: 0 };
    while run.selected.len() < limit && !pool.is_empty() && !stop(obj) {
        let (pos, gain) = best_candidate(&pool, obj, &mut run.evaluations);
        let u = pool.remove(pos);
        obj.insert(u);
        run.selected.push(u);
        run.gains.push(gain);
    }
    run
}

/// First node for the truncated potential: component sizes bound
/// `L_hat(q, {v})` from above, and one refinement step finds the true best.
/// `obj` must be the truncated objective over `r` with `C` empty.
pub fn get_first_node_1<O: MarginalObjective + ?Sized>(r: &SampleSet, obj: &O) -> Result<(NodeId, LazyState)> {
    let mut state = first_node_bounds(r)?;
    let u = get_next_node(&mut state, obj)?;
    Ok((u, state))
}

/// Lazy greedy with bounds from `state`: selects until `|C| = k`.
pub fn lazy_greedy<O: MarginalObjective + ?Sized>(state: &mut LazyState, k: usize, obj: &mut O) -> Result<()> {
    while state.selected.len() < k {
        let u = get_next_node(state, obj)?;
        obj.insert(u);
    }
    Ok(())
}
