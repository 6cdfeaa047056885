use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("node {0} is not in the graph")]
    UnknownNode(NodeId),

    #[error("link ({center}, {member}) is not covered by the connectivity table")]
    MissingLink { center: NodeId, member: NodeId },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("center set is empty")]
    EmptyCenters,

    #[error("sample set is empty")]
    EmptySamples,

    #[error("k = {k} exceeds the {available} available nodes")]
    TooManyCenters { k: usize, available: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("component has {edges} edges, above the enumeration cap of {cap}")]
    EnumerationCap { edges: usize, cap: usize },

    #[error("{subsets} candidate center sets exceed the brute-force cap of {cap}")]
    BruteForceCap { subsets: u128, cap: u128 },

    #[error("{requested} samples requested, above the budget of {budget}")]
    SampleBudget { requested: usize, budget: usize },

    #[error("sample cache: {0}")]
    Cache(String),

    #[error("sample set was drawn from graph {found}, expected {expected}")]
    FingerprintMismatch { expected: String, found: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
