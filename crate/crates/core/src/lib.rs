//! Directed 2K graph construction.
//!
//! Measures degree-correlation targets of directed graphs, decides whether a
//! target is realizable, builds simple digraphs that hit it exactly, and
//! provides baseline generators plus the metrics used to compare synthetic
//! graphs with measured ones.

pub mod baselines;
pub mod compare;
pub mod construct;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod realizability;
pub mod swaps;
pub mod targets;

pub use construct::{generate, ConstructError};
pub use graph::{collapse_bipartite, to_bipartite, BipNode, BipartiteGraph, DirectedGraph, Dyad, GraphError, Side};
pub use realizability::{check, RealizabilityReport, Violation};
pub use targets::{extract_d2k, extract_dds, extract_size, extract_uman, CellKey, D2KTargets, DdsTargets, Label, Mode, SizeTargets, UmanTargets};
