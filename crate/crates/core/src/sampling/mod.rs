//! Possible-world sampling and the Monte-Carlo estimators built on it.
//!
//! A [`SampleSet`] stores each sampled world as a component labeling, so
//! every connectivity query is a label comparison. World `i` of a seeded
//! set is a pure function of `(seed, i)`: sets can be generated in parallel
//! and grown later without changing the worlds already drawn.

mod cache;
mod world;

pub use cache::{decode_sample_set, encode_sample_set};
pub use world::{derive_seed, draw_world, PossibleWorld, SampleSet};

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::signature::{self, best_raw, ClusteringSignature, Connectivity};

fn non_empty(r: &SampleSet) -> Result<()> {
    if r.is_empty() {
        Err(Error::EmptySamples)
    } else {
        Ok(())
    }
}

/// Fraction of worlds in which `u` and `v` are connected.
pub fn pr_hat(r: &SampleSet, u: NodeId, v: NodeId) -> Result<f64> {
    non_empty(r)?;
    for x in [u, v] {
        if x.index() >= r.node_count() {
            return Err(Error::UnknownNode(x));
        }
    }
    let hits = r.worlds().iter().filter(|w| w.connected(u, v)).count();
    Ok(hits as f64 / r.len() as f64)
}

/// KM of a signature with estimated link probabilities.
pub fn km_hat(r: &SampleSet, sig: &ClusteringSignature) -> Result<f64> {
    non_empty(r)?;
    signature::km_value(r, sig)
}

/// KC of a signature with estimated link probabilities.
pub fn kc_hat(r: &SampleSet, sig: &ClusteringSignature) -> Result<f64> {
    non_empty(r)?;
    signature::kc_value(r, sig)
}

/// Best estimated connectivity of `v` to any node of `centers`.
pub fn f_hat(r: &SampleSet, v: NodeId, centers: &[NodeId]) -> Result<f64> {
    non_empty(r)?;
    if v.index() >= r.node_count() {
        return Err(Error::UnknownNode(v));
    }
    Ok(best_raw(r, centers)?[v.index()] / r.scale())
}

/// Sum of [`f_hat`] over all nodes; a value in `[0, n]`.
pub fn f_hat_sum(r: &SampleSet, centers: &[NodeId]) -> Result<f64> {
    non_empty(r)?;
    signature::coverage_value(r, centers)
}

/// Truncated coverage `sum_v min(q, f_hat(v, C))`; a value in `[0, nq]`.
pub fn l_hat(r: &SampleSet, q: f64, centers: &[NodeId]) -> Result<f64> {
    non_empty(r)?;
    if !(q > 0.0 && q <= 1.0) {
        return Err(crate::error::param(format!("threshold {q} outside (0, 1]")));
    }
    let scale = r.scale();
    let cap = q * scale;
    Ok(best_raw(r, centers)?.iter().map(|&b| b.min(cap)).sum::<f64>() / scale)
}

/// Mean size of the component containing `v`, which equals `f_hat_sum(r, {v})`.
pub fn component_size_sum(r: &SampleSet, v: NodeId) -> Result<f64> {
    non_empty(r)?;
    if v.index() >= r.node_count() {
        return Err(Error::UnknownNode(v));
    }
    Ok(r.raw_component_size_sum(v) / r.scale())
}
