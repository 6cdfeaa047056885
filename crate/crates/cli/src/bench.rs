use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use ugraph_cluster::UncertainGraph;

use crate::{solve_kcenter, solve_kmedian, Caps, Failure, GenSpec, KCenterAlgo, KMedianAlgo, Outcome, SolveKnobs};

/// Cells are the cross product `graphs x k x algorithms x seeds`.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct BenchMatrix {
    pub graphs: Vec<GenSpec>,
    pub k: Vec<usize>,
    pub algorithms: Vec<BenchAlgo>,
    pub seeds: Vec<u64>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
pub struct BenchKnobs {
    pub epsilon: Option<f64>,
    pub epsilon1: Option<f64>,
    pub epsilon2: Option<f64>,
    pub epsilon3: Option<f64>,
    pub delta: Option<f64>,
    pub samples: Option<usize>,
    pub opt_bound: Option<f64>,
    #[serde(default)]
    pub score_exact: bool,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "problem", rename_all = "kebab-case")]
pub enum BenchAlgo {
    Kmedian {
        algo: KMedianAlgo,
        #[serde(flatten)]
        knobs: BenchKnobs,
    },
    Kcenter {
        algo: KCenterAlgo,
        #[serde(flatten)]
        knobs: BenchKnobs,
    },
}

/// One line of bench output.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRecord {
    pub graph: usize,
    pub fingerprint: String,
    pub nodes: usize,
    pub edges: usize,
    pub problem: &'static str,
    pub algorithm: String,
    pub k: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub duration_ms: f64,
}

fn knobs_for(k: usize, seed: u64, b: &BenchKnobs) -> SolveKnobs {
    SolveKnobs {
        k,
        epsilon: b.epsilon,
        epsilon1: b.epsilon1,
        epsilon2: b.epsilon2,
        epsilon3: b.epsilon3,
        delta: b.delta,
        samples: b.samples,
        opt_bound: b.opt_bound,
        seed,
        cache: None,
        score_exact: b.score_exact,
    }
}

fn run_cell(index: usize, g: &UncertainGraph, k: usize, algo: &BenchAlgo, seed: u64, caps: &Caps) -> BenchRecord {
    let start = Instant::now();
    let (problem, name, result) = match algo {
        BenchAlgo::Kmedian { algo, knobs } => {
            ("kmedian", serde_json::to_value(algo), solve_kmedian(g, *algo, &knobs_for(k, seed, knobs), caps))
        }
        BenchAlgo::Kcenter { algo, knobs } => {
            ("kcenter", serde_json::to_value(algo), solve_kcenter(g, *algo, &knobs_for(k, seed, knobs), caps))
        }
    };
    let name = name.ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
    let mut rec = BenchRecord {
        graph: index,
        fingerprint: g.fingerprint(),
        nodes: g.node_count(),
        edges: g.edge_count(),
        problem,
        algorithm: name,
        k,
        seed,
        value: None,
        exact_value: None,
        center_count: None,
        samples: None,
        evaluations: None,
        error: None,
        duration_ms: 0.0,
    };
    match result {
        Ok(r) => {
            rec.value = Some(r.value);
            rec.exact_value = r.exact.map(|e| if problem == "kmedian" { e.km } else { e.kc });
            rec.center_count = Some(r.center_count);
            rec.samples = r.samples.values().copied().max();
            rec.evaluations = r.evaluations;
        }
        Err(e) => rec.error = Some(e.message),
    }
    rec.duration_ms = start.elapsed().as_secs_f64() * 1e3;
    rec
}

/// Runs every cell, in parallel, and returns the JSON lines in matrix order.
pub(crate) fn run_matrix(m: &BenchMatrix, caps: &Caps) -> Outcome<Vec<String>> {
    let graphs = m.graphs.iter().map(|s| s.build()).collect::<Result<Vec<_>, _>>()?;
    let mut cells = Vec::new();
    for (gi, g) in graphs.iter().enumerate() {
        for &k in &m.k {
            for algo in &m.algorithms {
                for &seed in &m.seeds {
                    cells.push((gi, g, k, algo, seed));
                }
            }
        }
    }
    if cells.is_empty() {
        return Err(Failure::parameter("the matrix has no cells"));
    }
    Ok(cells
        .par_iter()
        .map(|&(gi, g, k, algo, seed)| serde_json::to_string(&run_cell(gi, g, k, algo, seed, caps)).expect("record serializes"))
        .collect())
}
