use thiserror::Error;

use crate::hypergraph::{EdgeIndex, VertexIndex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed rational {0:?}")]
    MalformedRational(String),
    #[error("probability {0} is outside (0, 1)")]
    ProbabilityOutOfRange(String),
    #[error("edge {0} has an empty vertex set")]
    EmptyEdge(EdgeIndex),
    #[error("edge {edge} references vertex {vertex} but there are only {vertex_count} vertices")]
    VertexOutOfRange {
        edge: EdgeIndex,
        vertex: VertexIndex,
        vertex_count: usize,
    },
    #[error("edge {edge} lists vertex {vertex} more than once")]
    DuplicateVertex { edge: EdgeIndex, vertex: VertexIndex },
    #[error("edge {edge} has negative weight {weight}; preprocess negative weights first")]
    NegativeWeight { edge: EdgeIndex, weight: String },
    #[error("vertex {0} is out of range")]
    InvalidVertex(VertexIndex),
    #[error("edge {0} is out of range")]
    InvalidEdge(EdgeIndex),
    #[error("column order is not a permutation of the edge subset")]
    BadColumnOrder,
    #[error("subgraph edge {0} is not contained in the subgraph vertex set")]
    MalformedSubgraph(EdgeIndex),
    #[error("no parity factor exists for the given syndrome")]
    Infeasible,
    #[error("solution space has {nullity} free variables, above the cap of {cap}")]
    Overflow { nullity: usize, cap: usize },
    #[error("dual solution violates the constraint of edge {edge} (slack {slack})")]
    InfeasibleDual { edge: EdgeIndex, slack: String },
    #[error("direction is not feasible: {0}")]
    InfeasibleDirection(String),
    #[error("growth length must be non-negative, got {0}")]
    NegativeLength(String),
    #[error("requested growth length {requested} exceeds the feasible maximum {maximum}")]
    LengthTooLong { requested: String, maximum: String },
    #[error("growth along the direction is unbounded")]
    Unbounded,
    #[error("invalid subgraph {0} has an empty hair")]
    EmptyHair(String),
    #[error("relaxer finder contract violated: {0}")]
    FinderContract(String),
    #[error("no relaxer covers violated edge {0}")]
    UncoveredViolation(EdgeIndex),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}
