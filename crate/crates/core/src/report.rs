use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::exact::ExactOracle;
use crate::graph::{NodeId, UncertainGraph};
use crate::signature::{kc_value, km_value, ClusteringSignature, Connectivity, TableSource};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveKind {
    Km,
    Kc,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SolveParams {
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphInfo {
    pub fingerprint: String,
    pub nodes: usize,
    pub edges: usize,
}

impl GraphInfo {
    pub fn of(g: &UncertainGraph) -> Self {
        GraphInfo { fingerprint: g.fingerprint(), nodes: g.node_count(), edges: g.edge_count() }
    }
}

/// KM and KC of the returned signature under exact probabilities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExactScores {
    pub km: f64,
    pub kc: f64,
}

/// Whatever bounds an algorithm certifies; unused fields are omitted.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Certificate {
    /// `F(C)` of the selected centers under the declared table.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<f64>,
    /// Guaranteed fraction of the optimum.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub opt_lower_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lb: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ub: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q2: Option<f64>,
    /// Final guess of the guessing loop.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_min: Option<f64>,
    /// False when a search gave up before its stopping rule held.
    pub certified: bool,
}

/// One round of an iterative solver.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RoundTrace {
    pub round: usize,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feasible: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub centers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lb: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ub: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_min: Option<f64>,
}

/// Outcome of one solver run. Serialized field order is fixed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub algorithm: String,
    pub params: SolveParams,
    pub graph: GraphInfo,
    /// Centers in selection order.
    pub centers: Vec<NodeId>,
    pub center_count: usize,
    pub assignment: BTreeMap<NodeId, NodeId>,
    pub table_source: TableSource,
    pub objective: ObjectiveKind,
    /// KM or KC (per `objective`) under `table_source`.
    pub value: f64,
    pub km: f64,
    pub kc: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactScores>,
    pub certificate: Certificate,
    pub samples: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center_budget: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rounds: Vec<RoundTrace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<f64>,
    #[serde(skip)]
    pub signature: ClusteringSignature,
}

impl SolveReport {
    /// Scores `signature` against `table` and fills the common fields.
    pub fn build<C: Connectivity + ?Sized>(
        algorithm: &str,
        params: SolveParams,
        g: &UncertainGraph,
        centers: Vec<NodeId>,
        signature: ClusteringSignature,
        table: &C,
        objective: ObjectiveKind,
        exact: Option<&ExactOracle>,
    ) -> Result<Self> {
        let km = km_value(table, &signature)?;
        let kc = kc_value(table, &signature)?;
        let exact = match exact {
            Some(o) => Some(ExactScores { km: km_value(o.table(), &signature)?, kc: kc_value(o.table(), &signature)? }),
            None => None,
        };
        Ok(SolveReport {
            algorithm: algorithm.to_string(),
            params,
            graph: GraphInfo::of(g),
            center_count: centers.len(),
            centers,
            assignment: signature.assignment_map(),
            table_source: table.source(),
            objective,
            value: match objective {
                ObjectiveKind::Km => km,
                ObjectiveKind::Kc => kc,
            },
            km,
            kc,
            exact,
            certificate: Certificate { certified: true, ..Default::default() },
            samples: BTreeMap::new(),
            evaluations: None,
            center_budget: None,
            rounds: Vec::new(),
            duration_ms: None,
            signature,
        })
    }

    /// Centers in ascending ID order.
    pub fn center_set(&self) -> Vec<NodeId> {
        let mut c = self.centers.clone();
        c.sort_unstable();
        c
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// The signature-only document: centers, assignment, and both objectives.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignatureDoc {
    pub centers: Vec<NodeId>,
    pub assignment: BTreeMap<NodeId, NodeId>,
    pub km: f64,
    pub kc: f64,
}

impl SignatureDoc {
    pub fn new<C: Connectivity + ?Sized>(table: &C, sig: &ClusteringSignature) -> Result<Self> {
        Ok(SignatureDoc {
            centers: sig.centers().to_vec(),
            assignment: sig.assignment_map(),
            km: km_value(table, sig)?,
            kc: kc_value(table, sig)?,
        })
    }
}
