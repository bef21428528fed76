//! Directed-graph centrality toolkit for misinformation networks.
//!
//! The crate is organised along the analysis pipeline:
//!
//! - [`graph`] holds the immutable CSR graph, ingestion from interaction
//!   records and structural operations (transpose, node removal, degrees).
//! - [`centrality`] computes the traditional metrics (degree, harmonic
//!   closeness, betweenness, eigenvector) and the diffusion-oriented ones
//!   (propagation, vulnerability, dynamic influence).
//! - [`rank`] extracts top-k tables, partitions rankings into Venn regions
//!   and correlates scores against proxy attributes.
//! - [`sim`] runs cascade models and node-removal experiments.
//! - [`pipeline`] wires everything into the config-driven `run` command.

pub mod centrality;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod pipeline;
pub mod rank;
pub mod rng;
pub mod sim;

pub use centrality::{Metric, ScoreVector};
pub use error::{Error, Result};
pub use graph::{DegreeMode, Direction, DirectedGraph, InteractionKind, InteractionRecord, NodeId};
