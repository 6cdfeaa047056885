use std::borrow::Cow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{NodeId, UncertainGraph};
use crate::signature::{Connectivity, TableSource};

/// One sampled deterministic subgraph, kept only as its component structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PossibleWorld {
    /// Component label per node; labels are numbered by first appearance.
    labels: Vec<u32>,
    sizes: Vec<u32>,
    /// Nodes grouped by label; component `c` is `members[offsets[c]..offsets[c + 1]]`.
    members: Vec<u32>,
    offsets: Vec<u32>,
}

impl PossibleWorld {
    /// Builds a world from any labeling in which equal labels mean
    /// "same component".
    pub fn from_labels(raw: Vec<u32>) -> Result<Self> {
        let n = raw.len();
        if n > u32::MAX as usize {
            return Err(Error::InvalidGraph("too many nodes".into()));
        }
        let mut remap = std::collections::HashMap::new();
        let labels: Vec<u32> = raw
            .iter()
            .map(|&l| {
                let next = remap.len() as u32;
                *remap.entry(l).or_insert(next)
            })
            .collect();
        Ok(Self::from_canonical(labels, remap.len()))
    }

    fn from_canonical(labels: Vec<u32>, count: usize) -> Self {
        let mut sizes = vec![0u32; count];
        for &l in &labels {
            sizes[l as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(count + 1);
        offsets.push(0u32);
        for &s in &sizes {
            offsets.push(offsets.last().unwrap() + s);
        }
        let mut fill = offsets.clone();
        let mut members = vec![0u32; labels.len()];
        for (v, &l) in labels.iter().enumerate() {
            members[fill[l as usize] as usize] = v as u32;
            fill[l as usize] += 1;
        }
        PossibleWorld { labels, sizes, members, offsets }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> u32 {
        self.labels[v.index()]
    }

    pub fn component_sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn component_size(&self, v: NodeId) -> u32 {
        self.sizes[self.labels[v.index()] as usize]
    }

    /// Nodes in the same component as `v`, including `v`.
    pub fn component_of(&self, v: NodeId) -> &[u32] {
        let l = self.labels[v.index()] as usize;
        &self.members[self.offsets[l] as usize..self.offsets[l + 1] as usize]
    }

    pub fn connected(&self, u: NodeId, v: NodeId) -> bool {
        self.labels[u.index()] == self.labels[v.index()]
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let up = parent[parent[x as usize] as usize];
        parent[x as usize] = up;
        x = up;
    }
    x
}

/// Samples a world: every edge is kept independently with probability
/// `p(e)`, in edge order, and components are found with union-find.
pub fn draw_world<R: Rng + ?Sized>(g: &UncertainGraph, rng: &mut R) -> PossibleWorld {
    let n = g.node_count();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    let mut rank = vec![0u8; n];
    for e in g.edges() {
        if rng.gen::<f64>() < e.p {
            let a = find(&mut parent, e.u.index() as u32);
            let b = find(&mut parent, e.v.index() as u32);
            if a != b {
                let (hi, lo) = if rank[a as usize] >= rank[b as usize] { (a, b) } else { (b, a) };
                parent[lo as usize] = hi;
                if rank[hi as usize] == rank[lo as usize] {
                    rank[hi as usize] += 1;
                }
            }
        }
    }
    let mut label_of_root = vec![u32::MAX; n];
    let mut count = 0u32;
    let labels: Vec<u32> = (0..n as u32)
        .map(|v| {
            let r = find(&mut parent, v) as usize;
            if label_of_root[r] == u32::MAX {
                label_of_root[r] = count;
                count += 1;
            }
            label_of_root[r]
        })
        .collect();
    PossibleWorld::from_canonical(labels, count as usize)
}

/// SplitMix64 step; used to derive independent pool seeds from one seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn world_at(g: &UncertainGraph, seed: u64, index: u64) -> PossibleWorld {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    draw_world(g, &mut rng)
}

/// An ordered multiset of possible worlds drawn from one graph.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    fingerprint: String,
    n: usize,
    /// `None` for hand-built sets, which cannot be grown.
    seed: Option<u64>,
    /// Index of the first world in the seeded stream.
    start: u64,
    worlds: Vec<PossibleWorld>,
}

impl SampleSet {
    /// Worlds `0..count` of the stream for `seed`.
    pub fn generate(g: &UncertainGraph, seed: u64, count: usize) -> Self {
        Self::generate_from(g, seed, 0, count)
    }

    /// Worlds `start..start + count` of the stream for `seed`.
    pub fn generate_from(g: &UncertainGraph, seed: u64, start: u64, count: usize) -> Self {
        let mut set = SampleSet { fingerprint: g.fingerprint(), n: g.node_count(), seed: Some(seed), start, worlds: Vec::new() };
        set.extend_unchecked(g, count);
        set
    }

    /// A set of explicit worlds, e.g. for tests.
    pub fn from_worlds(g: &UncertainGraph, worlds: Vec<PossibleWorld>) -> Result<Self> {
        Self::from_parts(g.fingerprint(), g.node_count(), None, 0, worlds)
    }

    pub(crate) fn from_parts(
        fingerprint: String,
        n: usize,
        seed: Option<u64>,
        start: u64,
        worlds: Vec<PossibleWorld>,
    ) -> Result<Self> {
        if let Some(w) = worlds.iter().find(|w| w.node_count() != n) {
            return Err(Error::InvalidGraph(format!("world has {} nodes, graph has {n}", w.node_count())));
        }
        Ok(SampleSet { fingerprint, n, seed, start, worlds })
    }

    fn extend_unchecked(&mut self, g: &UncertainGraph, target: usize) {
        let seed = self.seed.expect("seeded sample set");
        let from = self.start + self.worlds.len() as u64;
        let to = self.start + target as u64;
        if to <= from {
            return;
        }
        let fresh: Vec<PossibleWorld> = (from..to).into_par_iter().map(|i| world_at(g, seed, i)).collect();
        self.worlds.extend(fresh);
    }

    pub fn check_graph(&self, g: &UncertainGraph) -> Result<()> {
        let fp = g.fingerprint();
        if fp != self.fingerprint {
            return Err(Error::FingerprintMismatch { expected: fp, found: self.fingerprint.clone() });
        }
        Ok(())
    }

    /// Appends fresh worlds from the stream until the set holds `target`.
    /// Never removes worlds.
    pub fn grow_to(&mut self, g: &UncertainGraph, target: usize) -> Result<()> {
        self.check_graph(g)?;
        if self.seed.is_none() {
            return Err(crate::error::param("hand-built sample sets cannot be grown"));
        }
        self.extend_unchecked(g, target);
        Ok(())
    }

    /// The next `count` worlds of the stream, as a separate set.
    pub fn next_block(&self, g: &UncertainGraph, count: usize) -> Result<SampleSet> {
        self.check_graph(g)?;
        let seed = self.seed.ok_or_else(|| crate::error::param("hand-built sample sets have no stream"))?;
        Ok(Self::generate_from(g, seed, self.start + self.worlds.len() as u64, count))
    }

    /// Appends a set that continues this one's stream.
    pub fn absorb(&mut self, other: SampleSet) -> Result<()> {
        let contiguous = other.seed == self.seed
            && self.seed.is_some()
            && other.fingerprint == self.fingerprint
            && other.start == self.start + self.worlds.len() as u64;
        if !contiguous {
            return Err(crate::error::param("sample sets are not contiguous in one stream"));
        }
        self.worlds.extend(other.worlds);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn worlds(&self) -> &[PossibleWorld] {
        &self.worlds
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub(crate) fn raw_component_size_sum(&self, v: NodeId) -> f64 {
        self.worlds.iter().map(|w| w.component_size(v) as u64).sum::<u64>() as f64
    }
}

impl Connectivity for SampleSet {
    fn node_count(&self) -> usize {
        self.n
    }

    fn scale(&self) -> f64 {
        self.worlds.len() as f64
    }

    fn raw_row(&self, u: NodeId) -> Cow<'_, [f64]> {
        let mut counts = vec![0u64; self.n];
        for w in &self.worlds {
            for &x in w.component_of(u) {
                counts[x as usize] += 1;
            }
        }
        Cow::Owned(counts.into_iter().map(|c| c as f64).collect())
    }

    fn raw(&self, u: NodeId, v: NodeId) -> f64 {
        self.worlds.iter().filter(|w| w.connected(u, v)).count() as f64
    }

    fn source(&self) -> TableSource {
        TableSource::Estimated { samples: self.worlds.len() }
    }
}
