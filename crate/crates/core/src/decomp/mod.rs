//! Directed tree decompositions, directed and hyper branch decompositions,
//! their validators, and conversions between them.

pub mod branch;
pub mod dtd;
pub mod ghd;

use thiserror::Error;

use crate::cycles::CycleError;
use crate::hypergraph::HypergraphError;

pub use branch::{dbd_to_hbd, exact_dbw, hbd_to_dbd, validate_dbd, validate_hbd, Dbd, Hbd};
pub use dtd::{dtd_to_leaf_dtd, is_leaf_dtd, validate_dtd, Dtd};
pub use ghd::{dtd_to_dbd, dtd_to_ghd};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error(transparent)]
    Cycles(#[from] CycleError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error("invalid decomposition: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("vertex {0} lies on no directed cycle")]
    VertexOnNoCycle(usize),
    #[error("hypergraph is not the dual cycle hypergraph of the digraph")]
    GroundMismatch,
}

/// Outcome of validating a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub valid: bool,
    pub width: usize,
    pub violations: Vec<String>,
}

impl Report {
    fn from(width: usize, violations: Vec<String>) -> Self {
        Report { valid: violations.is_empty(), width, violations }
    }
}
