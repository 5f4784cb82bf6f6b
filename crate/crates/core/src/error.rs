use thiserror::Error;

use crate::graph::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("loop at vertex {0}")]
    Loop(usize),

    #[error("duplicate boundary vertex {0}")]
    DuplicateBoundary(usize),

    #[error("duplicate edge {{{0},{1}}}")]
    DuplicateEdge(usize, usize),

    #[error("edge weight {0} is not a finite positive number")]
    BadWeight(f64),

    #[error("graph parse error: {0}")]
    Parse(String),

    #[error("invalid graph with boundary: {}", join_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("graph is not connected")]
    Disconnected,

    #[error("boundary diameter undefined: need at least 2 boundary vertices, got {0}")]
    BoundaryTooSmall(usize),

    #[error("empty boundary")]
    EmptyBoundary,

    #[error("boundary restriction of the test function is zero")]
    ZeroBoundaryRestriction,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite matrix or vector entry")]
    NonFinite,

    #[error("matrix is not symmetric (|a_ij - a_ji| = {0:e})")]
    NotSymmetric(f64),

    #[error("matrix not SPD: pivot {pivot:e} at row {row}")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
