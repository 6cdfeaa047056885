//! Clustering of uncertain graphs.
//!
//! An uncertain graph keeps each edge independently with its own
//! probability. A k-clustering links every node to one of k centers; the
//! k-median objective averages the connection probabilities of the links
//! and the k-center objective takes their minimum.
//!
//! * [`exact`] computes connection probabilities exactly on small graphs.
//! * [`sampling`] estimates them from possible worlds.
//! * [`kmedian`] and [`kcenter`] hold the solvers, with and without the
//!   exact oracle.

pub mod bounds;
pub mod error;
pub mod exact;
pub mod gen;
pub mod graph;
pub mod kcenter;
pub mod kmedian;
pub mod report;
pub mod sampling;
pub mod signature;

pub use error::{Error, Result};
pub use exact::{brute_force_kcenter, brute_force_kmedian, exact_pr_connect, ExactOracle};
pub use graph::{parse_graph, Edge, NodeId, UncertainGraph};
pub use report::{SignatureDoc, SolveReport};
pub use sampling::{decode_sample_set, encode_sample_set, SampleSet};
pub use signature::{assign_clusters, kc_value, km_value, ClusteringSignature, Connectivity, ConnectivityTable};
