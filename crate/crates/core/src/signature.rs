//! Connectivity tables, clustering signatures, and the KM / KC objectives.

use std::borrow::Cow;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// Where connection probabilities come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TableSource {
    Exact,
    Estimated { samples: usize },
}

/// Anything that answers `Pr[u ~ v]` queries.
///
/// Values are exposed in raw units together with a scale: the probability
/// is `raw / scale`. Exact tables use scale 1; sample sets report integer
/// world counts with scale `|R|`, which keeps sums over nodes exact.
pub trait Connectivity {
    fn node_count(&self) -> usize;

    fn scale(&self) -> f64;

    /// Raw connectivity from `u` to every node, indexed by node index.
    fn raw_row(&self, u: NodeId) -> Cow<'_, [f64]>;

    fn raw(&self, u: NodeId, v: NodeId) -> f64 {
        self.raw_row(u)[v.index()]
    }

    fn pr(&self, u: NodeId, v: NodeId) -> f64 {
        self.raw(u, v) / self.scale()
    }

    fn source(&self) -> TableSource;
}

/// Dense all-pairs table of connection probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectivityTable {
    n: usize,
    values: Vec<f64>,
    source: TableSource,
}

impl ConnectivityTable {
    /// Builds a table from a row-major `n x n` matrix. The matrix must be
    /// symmetric with a unit diagonal and entries in `[0, 1]`.
    pub fn from_matrix(n: usize, values: Vec<f64>, source: TableSource) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::InvalidGraph(format!("table needs {} entries, got {}", n * n, values.len())));
        }
        for u in 0..n {
            if values[u * n + u] != 1.0 {
                return Err(Error::InvalidGraph(format!("Pr[{0} ~ {0}] must be 1", u + 1)));
            }
            for v in 0..n {
                let x = values[u * n + v];
                if !(0.0..=1.0).contains(&x) || x != values[v * n + u] {
                    return Err(Error::InvalidGraph(format!("bad entry at ({}, {})", u + 1, v + 1)));
                }
            }
        }
        Ok(ConnectivityTable { n, values, source })
    }

    /// Materializes any [`Connectivity`] source as a dense table.
    pub fn materialize<C: Connectivity + ?Sized>(conn: &C) -> Self {
        let n = conn.node_count();
        let scale = conn.scale();
        let mut values = Vec::with_capacity(n * n);
        for u in 0..n {
            values.extend(conn.raw_row(NodeId::from_index(u)).iter().map(|&r| r / scale));
        }
        ConnectivityTable { n, values, source: conn.source() }
    }

    pub fn get(&self, u: NodeId, v: NodeId) -> f64 {
        self.values[u.index() * self.n + v.index()]
    }

    pub fn row(&self, u: NodeId) -> &[f64] {
        &self.values[u.index() * self.n..(u.index() + 1) * self.n]
    }

    /// Upper-triangle entries as `(u, v, p)` with `u < v`.
    pub fn pairs(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n).map(move |v| (NodeId::from_index(u), NodeId::from_index(v), self.values[u * self.n + v]))
        })
    }
}

impl Connectivity for ConnectivityTable {
    fn node_count(&self) -> usize {
        self.n
    }

    fn scale(&self) -> f64 {
        1.0
    }

    fn raw_row(&self, u: NodeId) -> Cow<'_, [f64]> {
        Cow::Borrowed(self.row(u))
    }

    fn raw(&self, u: NodeId, v: NodeId) -> f64 {
        self.get(u, v)
    }

    fn source(&self) -> TableSource {
        self.source
    }
}

/// A clustering encoded by its cluster links `(center, member)`.
///
/// Every node is the member of exactly one link and every center is linked
/// to itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusteringSignature {
    /// `assignment[v]` is the center of `v`'s cluster.
    assignment: Vec<NodeId>,
    centers: Vec<NodeId>,
}

impl ClusteringSignature {
    pub fn from_assignment(assignment: Vec<NodeId>) -> Result<Self> {
        let n = assignment.len();
        if n == 0 {
            return Err(Error::InvalidSignature("no nodes".into()));
        }
        let mut centers: Vec<NodeId> = assignment.clone();
        centers.sort_unstable();
        centers.dedup();
        for &c in &centers {
            if c.index() >= n {
                return Err(Error::InvalidSignature(format!("center {c} is not a node")));
            }
            if assignment[c.index()] != c {
                return Err(Error::InvalidSignature(format!(
                    "center {c} belongs to the cluster of {}",
                    assignment[c.index()]
                )));
            }
        }
        Ok(ClusteringSignature { assignment, centers })
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    /// Distinct centers in ascending ID order.
    pub fn centers(&self) -> &[NodeId] {
        &self.centers
    }

    pub fn k(&self) -> usize {
        self.centers.len()
    }

    pub fn center_of(&self, v: NodeId) -> NodeId {
        self.assignment[v.index()]
    }

    /// Links `(center, member)` in member order.
    pub fn links(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.assignment.iter().enumerate().map(|(v, &c)| (c, NodeId::from_index(v)))
    }

    /// Member -> center map, for reports.
    pub fn assignment_map(&self) -> BTreeMap<NodeId, NodeId> {
        self.links().map(|(c, v)| (v, c)).collect()
    }
}

fn check_cover<C: Connectivity + ?Sized>(table: &C, sig: &ClusteringSignature) -> Result<()> {
    if sig.node_count() != table.node_count() {
        let (center, member) = sig
            .links()
            .find(|(c, v)| c.index() >= table.node_count() || v.index() >= table.node_count())
            .unwrap_or((sig.centers()[0], sig.centers()[0]));
        return Err(Error::MissingLink { center, member });
    }
    Ok(())
}

/// Mean link connectivity; center self-links contribute 1.
pub fn km_value<C: Connectivity + ?Sized>(table: &C, sig: &ClusteringSignature) -> Result<f64> {
    check_cover(table, sig)?;
    let mut raw = 0.0;
    for &c in sig.centers() {
        let row = table.raw_row(c);
        raw += sig.links().filter(|&(cc, _)| cc == c).map(|(_, v)| row[v.index()]).sum::<f64>();
    }
    Ok(raw / table.scale() / sig.node_count() as f64)
}

/// Minimum link connectivity.
pub fn kc_value<C: Connectivity + ?Sized>(table: &C, sig: &ClusteringSignature) -> Result<f64> {
    check_cover(table, sig)?;
    let mut raw = f64::INFINITY;
    for &c in sig.centers() {
        let row = table.raw_row(c);
        for (_, v) in sig.links().filter(|&(cc, _)| cc == c) {
            raw = raw.min(row[v.index()]);
        }
    }
    Ok(raw / table.scale())
}

fn check_centers(n: usize, centers: &[NodeId]) -> Result<Vec<NodeId>> {
    if centers.is_empty() {
        return Err(Error::EmptyCenters);
    }
    if let Some(&c) = centers.iter().find(|c| c.index() >= n) {
        return Err(Error::UnknownNode(c));
    }
    let mut sorted = centers.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(sorted)
}

/// Per-node best raw connectivity to any center, `f_v(C)` in raw units.
pub fn best_raw<C: Connectivity + ?Sized>(table: &C, centers: &[NodeId]) -> Result<Vec<f64>> {
    let centers = check_centers(table.node_count(), centers)?;
    let mut best = vec![f64::NEG_INFINITY; table.node_count()];
    for &c in &centers {
        for (b, &r) in best.iter_mut().zip(table.raw_row(c).iter()) {
            if r > *b {
                *b = r;
            }
        }
    }
    Ok(best)
}

/// `F(C) = sum_v max_{c in C} Pr[c ~ v]`.
pub fn coverage_value<C: Connectivity + ?Sized>(table: &C, centers: &[NodeId]) -> Result<f64> {
    Ok(best_raw(table, centers)?.iter().sum::<f64>() / table.scale())
}

/// `min_v max_{c in C} Pr[c ~ v]`.
pub fn min_coverage<C: Connectivity + ?Sized>(table: &C, centers: &[NodeId]) -> Result<f64> {
    Ok(best_raw(table, centers)?.iter().copied().fold(f64::INFINITY, f64::min) / table.scale())
}

/// Links every node to the center it is best connected to. Ties go to the
/// smallest center ID, and centers always link to themselves.
pub fn assign_clusters<C: Connectivity + ?Sized>(table: &C, centers: &[NodeId]) -> Result<ClusteringSignature> {
    let centers = check_centers(table.node_count(), centers)?;
    let n = table.node_count();
    let mut best = vec![f64::NEG_INFINITY; n];
    let mut assignment = vec![centers[0]; n];
    for &c in &centers {
        let row = table.raw_row(c);
        for v in 0..n {
            if row[v] > best[v] {
                best[v] = row[v];
                assignment[v] = c;
            }
        }
    }
    for &c in &centers {
        assignment[c.index()] = c;
    }
    ClusteringSignature::from_assignment(assignment)
}
