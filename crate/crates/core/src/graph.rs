//! Uncertain graph model and the plain-text edge-list format.
//!
//! An edge list starts with a header line `n m` followed by `m` lines
//! `u v p`, where `u` and `v` are 1-based node IDs and `p` is the
//! existence probability of the undirected edge, `0 < p <= 1`. Lines whose
//! first non-blank character is `#` are comments; blank lines are ignored.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// A node of an [`UncertainGraph`].
///
/// Stored as a 0-based index; displayed and serialized as the 1-based ID
/// used in edge lists and reports.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(u32);

impl NodeId {
    pub fn from_index(index: usize) -> Self {
        NodeId(u32::try_from(index).expect("node index fits in u32"))
    }

    /// Builds a node from its 1-based ID. Panics on 0.
    pub fn new(id: u32) -> Self {
        assert!(id >= 1, "node IDs are 1-based");
        NodeId(id - 1)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The 1-based ID.
    #[inline]
    pub fn id(self) -> u32 {
        self.0 + 1
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

impl Serialize for NodeId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.id())
    }
}

impl<'de> Deserialize<'de> for NodeId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let id = u32::deserialize(d)?;
        if id == 0 {
            return Err(serde::de::Error::custom("node IDs are 1-based"));
        }
        Ok(NodeId::new(id))
    }
}

/// Shorthand for a list of 1-based IDs.
pub fn nodes(ids: &[u32]) -> Vec<NodeId> {
    ids.iter().map(|&id| NodeId::new(id)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub p: f64,
}

/// Undirected graph whose edges exist independently with probability `p(e)`.
#[derive(Clone, Debug, PartialEq)]
pub struct UncertainGraph {
    n: usize,
    edges: Vec<Edge>,
    /// Incident edge indices per node.
    adjacency: Vec<Vec<usize>>,
}

impl UncertainGraph {
    /// Validates and builds a graph. Endpoints may come in either order and
    /// are stored with `u < v`; edges keep their input order.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (u32, u32, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no nodes".into()));
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidGraph(format!("{n} nodes is too many")));
        }
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for (a, b, p) in edges {
            let edge = make_edge(n, a, b, p).map_err(Error::InvalidGraph)?;
            if !seen.insert((edge.u, edge.v)) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({}, {})", edge.u, edge.v)));
            }
            list.push(edge);
        }
        Ok(Self::from_validated(n, list))
    }

    fn from_validated(n: usize, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            adjacency[e.u.index()].push(i);
            adjacency[e.v.index()].push(i);
        }
        UncertainGraph { n, edges, adjacency }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + Clone {
        (0..self.n).map(NodeId::from_index)
    }

    pub fn incident(&self, v: NodeId) -> &[usize] {
        &self.adjacency[v.index()]
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.index() < self.n
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownNode(v))
        }
    }

    /// Structural components (every edge present), as a per-node label.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for &ei in &self.adjacency[x] {
                    let e = &self.edges[ei];
                    let y = if e.u.index() == x { e.v.index() } else { e.u.index() };
                    if label[y] == usize::MAX {
                        label[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.component_labels().iter().all(|&l| l == 0)
    }

    /// Product of all edge probabilities; a lower bound on every connection
    /// probability of a connected graph.
    pub fn edge_probability_product(&self) -> f64 {
        self.edges.iter().map(|e| e.p).product()
    }

    /// Canonical edge list: header, then edges sorted by `(u, v)`.
    pub fn to_edge_list(&self) -> String {
        let mut sorted = self.edges.clone();
        sorted.sort_by_key(|e| (e.u, e.v));
        let mut out = format!("{} {}\n", self.n, sorted.len());
        for e in &sorted {
            out.push_str(&format!("{} {} {}\n", e.u, e.v, e.p));
        }
        out
    }

    /// Hex digest of the canonical edge list, truncated to 16 characters.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_edge_list().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Copy of the graph with nodes renamed by `perm` (old index -> new index).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::InvalidGraph("permutation length differs from node count".into()));
        }
        UncertainGraph::new(
            self.n,
            self.edges.iter().map(|e| {
                (perm[e.u.index()] as u32 + 1, perm[e.v.index()] as u32 + 1, e.p)
            }),
        )
    }
}

fn make_edge(n: usize, a: u32, b: u32, p: f64) -> std::result::Result<Edge, String> {
    for id in [a, b] {
        if id == 0 || id as usize > n {
            return Err(format!("node ID {id} out of range 1..={n}"));
        }
    }
    if a == b {
        return Err(format!("self-loop on node {a}"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(format!("probability {p} out of range (0, 1]"));
    }
    let (u, v) = if a < b { (a, b) } else { (b, a) };
    Ok(Edge { u: NodeId::new(u), v: NodeId::new(v), p })
}

/// Parses an edge-list document. Every error carries its 1-based line number.
pub fn parse_graph(text: &str) -> Result<UncertainGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let err = |line: usize, message: String| Error::Parse { line, message };

    let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header line \"n m\"".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(err(hline, format!("expected \"n m\", found {} fields", fields.len())));
    }
    let n: u32 = parse_field(fields[0], "node count").map_err(|m| err(hline, m))?;
    let m: usize = parse_field(fields[1], "edge count").map_err(|m| err(hline, m))?;
    if n == 0 {
        return Err(err(hline, "graph has no nodes".into()));
    }

    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(m.min(1 << 16));
    let mut last_line = hline;
    for (line, text) in lines {
        last_line = line;
        if edges.len() == m {
            return Err(err(line, format!("more than the declared {m} edges")));
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(line, format!("expected \"u v p\", found {} fields", fields.len())));
        }
        let a: u32 = parse_field(fields[0], "node ID").map_err(|m| err(line, m))?;
        let b: u32 = parse_field(fields[1], "node ID").map_err(|m| err(line, m))?;
        let p: f64 = parse_field(fields[2], "probability").map_err(|m| err(line, m))?;
        let edge = make_edge(n as usize, a, b, p).map_err(|m| err(line, m))?;
        if !seen.insert((edge.u, edge.v)) {
            return Err(err(line, format!("duplicate edge ({}, {})", edge.u, edge.v)));
        }
        edges.push(edge);
    }
    if edges.len() != m {
        return Err(err(last_line, format!("declared {m} edges, found {}", edges.len())));
    }
    Ok(UncertainGraph::from_validated(n as usize, edges))
}

fn parse_field<T: FromStr>(s: &str, what: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|_| format!("invalid {what} {s:?}"))
}

impl FromStr for UncertainGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_graph(s)
    }
}
