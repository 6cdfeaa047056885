//! Exact connection probabilities by exhaustive enumeration, and brute-force
//! optimal clusterings built on top of them. Only usable on small graphs:
//! the work grows exponentially with the edge count of a component.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{NodeId, UncertainGraph};
use crate::signature::{best_raw, Connectivity, ConnectivityTable, TableSource};

/// Largest number of edges in one component that will be enumerated.
pub const DEFAULT_EDGE_CAP: usize = 24;

/// Largest number of candidate center sets a brute-force search will score.
pub const DEFAULT_SUBSET_CAP: u128 = 2_000_000;

/// Node partitions of one component, each with the total probability of
/// the possible worlds that induce it.
fn component_partitions(
    g: &UncertainGraph,
    members: &[usize],
    cap: usize,
) -> Result<Vec<(Vec<u16>, f64)>> {
    let mut local = vec![usize::MAX; g.node_count()];
    for (i, &v) in members.iter().enumerate() {
        local[v] = i;
    }
    let edges: Vec<(usize, usize, f64)> = g
        .edges()
        .iter()
        .filter(|e| local[e.u.index()] != usize::MAX)
        .map(|e| (local[e.u.index()], local[e.v.index()], e.p))
        .collect();
    if edges.len() > cap {
        return Err(Error::EnumerationCap { edges: edges.len(), cap });
    }

    // Each edge splits every partition into "edge absent" and "edge present";
    // worlds that induce the same partition are merged as we go.
    let identity: Vec<u16> = (0..members.len() as u16).collect();
    let mut states: BTreeMap<Vec<u16>, f64> = BTreeMap::new();
    states.insert(identity, 1.0);
    for &(a, b, p) in &edges {
        let mut next: BTreeMap<Vec<u16>, f64> = BTreeMap::new();
        for (labels, prob) in states {
            if labels[a] == labels[b] {
                *next.entry(labels).or_insert(0.0) += prob;
                continue;
            }
            if p < 1.0 {
                *next.entry(labels.clone()).or_insert(0.0) += prob * (1.0 - p);
            }
            *next.entry(merge(&labels, labels[a], labels[b])).or_insert(0.0) += prob * p;
        }
        states = next;
    }
    let mut out: Vec<(Vec<u16>, f64)> = states.into_iter().collect();
    // Accumulate large terms first.
    out.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
    Ok(out)
}

/// Merges two blocks and relabels blocks by first occurrence.
fn merge(labels: &[u16], a: u16, b: u16) -> Vec<u16> {
    let mut map = vec![u16::MAX; labels.len()];
    let mut next = 0;
    labels
        .iter()
        .map(|&l| {
            let l = if l == b { a } else { l };
            if map[l as usize] == u16::MAX {
                map[l as usize] = next;
                next += 1;
            }
            map[l as usize]
        })
        .collect()
}

fn members_by_component(g: &UncertainGraph) -> Vec<Vec<usize>> {
    let labels = g.component_labels();
    let count = labels.iter().max().map_or(0, |m| m + 1);
    let mut members = vec![Vec::new(); count];
    for (v, &l) in labels.iter().enumerate() {
        members[l].push(v);
    }
    members
}

/// Exact `Pr[u ~ v]`: the total probability of the possible worlds in which
/// `u` and `v` are connected. Only the component containing `u` is
/// enumerated; `cap` bounds its edge count.
pub fn exact_pr_connect(g: &UncertainGraph, u: NodeId, v: NodeId, cap: usize) -> Result<f64> {
    g.check_node(u)?;
    g.check_node(v)?;
    if u == v {
        return Ok(1.0);
    }
    let labels = g.component_labels();
    let members: Vec<usize> = (0..g.node_count()).filter(|&x| labels[x] == labels[u.index()]).collect();
    let partitions = component_partitions(g, &members, cap)?;
    if labels[u.index()] != labels[v.index()] {
        return Ok(0.0);
    }
    let lu = members.binary_search(&u.index()).unwrap();
    let lv = members.binary_search(&v.index()).unwrap();
    Ok(partitions.iter().filter(|(l, _)| l[lu] == l[lv]).map(|(_, p)| p).sum())
}

/// Connectivity oracle holding the exact all-pairs table of a small graph.
#[derive(Clone, Debug)]
pub struct ExactOracle {
    graph: UncertainGraph,
    table: ConnectivityTable,
}

impl ExactOracle {
    pub fn new(graph: &UncertainGraph) -> Result<Self> {
        Self::with_cap(graph, DEFAULT_EDGE_CAP)
    }

    pub fn with_cap(graph: &UncertainGraph, cap: usize) -> Result<Self> {
        let n = graph.node_count();
        let mut values = vec![0.0; n * n];
        for v in 0..n {
            values[v * n + v] = 1.0;
        }
        for members in members_by_component(graph) {
            if members.len() < 2 {
                continue;
            }
            for (labels, prob) in component_partitions(graph, &members, cap)? {
                for (i, j) in (0..members.len()).tuple_combinations() {
                    if labels[i] == labels[j] {
                        values[members[i] * n + members[j]] += prob;
                    }
                }
            }
        }
        for u in 0..n {
            for v in u + 1..n {
                let x = values[u * n + v].clamp(0.0, 1.0);
                values[u * n + v] = x;
                values[v * n + u] = x;
            }
        }
        let table = ConnectivityTable::from_matrix(n, values, TableSource::Exact)?;
        Ok(ExactOracle { graph: graph.clone(), table })
    }

    pub fn graph(&self) -> &UncertainGraph {
        &self.graph
    }

    pub fn table(&self) -> &ConnectivityTable {
        &self.table
    }

    pub fn pr(&self, u: NodeId, v: NodeId) -> f64 {
        self.table.get(u, v)
    }
}

/// Result of an exhaustive search over center sets.
#[derive(Clone, Debug, PartialEq)]
pub struct BruteForce {
    pub centers: Vec<NodeId>,
    pub objective: f64,
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

fn brute_force<C, F>(table: &C, k: usize, cap: u128, score: F) -> Result<BruteForce>
where
    C: Connectivity + ?Sized,
    F: Fn(&[f64]) -> f64,
{
    let n = table.node_count();
    if k == 0 {
        return Err(crate::error::param("k must be at least 1"));
    }
    if k > n {
        return Err(Error::TooManyCenters { k, available: n });
    }
    let subsets = binomial(n, k);
    if subsets > cap {
        return Err(Error::BruteForceCap { subsets, cap });
    }
    let mut best: Option<BruteForce> = None;
    for combo in (0..n).combinations(k) {
        let centers: Vec<NodeId> = combo.into_iter().map(NodeId::from_index).collect();
        let value = score(&best_raw(table, &centers)?) / table.scale();
        if best.as_ref().map_or(true, |b| value > b.objective) {
            best = Some(BruteForce { centers, objective: value });
        }
    }
    Ok(best.expect("at least one subset"))
}

/// Optimal k-median value `max_C F(C) / n` over all k-subsets; ties go to
/// the lexicographically smallest center set.
pub fn brute_force_kmedian<C: Connectivity + ?Sized>(table: &C, k: usize, cap: u128) -> Result<BruteForce> {
    let n = table.node_count() as f64;
    brute_force(table, k, cap, |best| best.iter().sum::<f64>() / n)
}

/// Optimal k-center value `max_C min_v f_v(C)` over all k-subsets.
pub fn brute_force_kcenter<C: Connectivity + ?Sized>(table: &C, k: usize, cap: u128) -> Result<BruteForce> {
    brute_force(table, k, cap, |best| best.iter().copied().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
pub(crate) mod oracle {
    //! Literal enumeration of all 2^m edge subsets, independent of the
    //! partition-merging path above.
    use crate::graph::UncertainGraph;

    pub fn enumerate_all_pairs(g: &UncertainGraph) -> Vec<f64> {
        let n = g.node_count();
        let m = g.edge_count();
        assert!(m <= 20);
        let mut acc = vec![0.0; n * n];
        for mask in 0u32..(1 << m) {
            let mut prob = 1.0;
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                let mut r = x;
                while p[r] != r {
                    r = p[r];
                }
                r
            }
            for (i, e) in g.edges().iter().enumerate() {
                if mask & (1 << i) != 0 {
                    prob *= e.p;
                    let (a, b) = (find(&mut parent, e.u.index()), find(&mut parent, e.v.index()));
                    parent[a] = b;
                } else {
                    prob *= 1.0 - e.p;
                }
            }
            for u in 0..n {
                for v in 0..n {
                    if find(&mut parent, u) == find(&mut parent, v) {
                        acc[u * n + v] += prob;
                    }
                }
            }
        }
        acc
    }
}
