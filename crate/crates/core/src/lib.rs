//! Random network models with planted homophyly communities, threshold
//! cascading failures, physical node attacks and the structural analyses
//! used to compare how secure and robust the models are.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] holds the immutable [`Graph`] type, node sets, conductance and
//!   connected-component primitives.
//! * [`netgraph`] reads and writes the line-oriented `netgraph v1` format.
//! * [`generators`] builds Erdős–Rényi, preferential attachment, security
//!   model and overlapping model graphs from a seeded [`RngStream`].
//! * [`cascade`] assigns thresholds, computes infection and injury sets and
//!   produces Monte Carlo attack curves.
//! * [`analysis`] extracts communities, degree priorities, the infection
//!   priority tree, power-law reports and short-path navigation.
//! * [`experiment`] parses experiment spec files and reproduces the figure
//!   pipelines as CSV (and optional SVG) files.

pub mod analysis;
pub mod cascade;
mod dsu;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod netgraph;
pub mod rng;
pub mod svg;

pub use cascade::{
    AttackPlan, AttackStrategy, Aggregate, CascadeResult, CurveConfig, CurveRow,
    ThresholdAssignment, ThresholdMode,
};
pub use error::{Error, Result};
pub use generators::{GenParams, LogBase, Model};
pub use graph::{Color, EdgeKind, EdgeRecord, Graph, GraphBuilder, ModelKind, ModelTag, NodeId, NodeMeta, NodeSet};
pub use rng::RngStream;
