//! Recognition of strongly connected digraphs of directed treewidth one,
//! with machine-checkable certificates in both directions.
//!
//! A YES answer comes with a directed tree decomposition of width one. A NO
//! answer comes with a butterfly-minor script that reduces the input to a
//! bicycle or to `A4`, plus a haven of order three.
//!
//! Around the recogniser sit the supporting constructions: cycle hypergraphs
//! and their duals, hypertree recognition, directed branch decompositions,
//! generalised hypertree decompositions of the dual cycle hypergraph, and
//! exhaustive cops-and-robber oracles used as ground truth.

pub mod cycles;
pub mod decomp;
pub mod digraph;
pub mod dtw1;
pub mod format;
pub mod games;
pub mod generate;
pub mod hypergraph;
pub mod suite;
pub mod vset;

pub use digraph::Digraph;
pub use vset::VertexSet;
