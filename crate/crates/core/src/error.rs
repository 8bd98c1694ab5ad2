use thiserror::Error;

use crate::multigraph::{EdgeId, VertexId};

/// Errors raised by graph construction, minors, polynomial evaluation and the
/// prover.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edges e and f must be distinct (both are {0})")]
    SameEdge(EdgeId),
    #[error("edge {0} is a loop")]
    LoopEdge(EdgeId),
    #[error("orientation {tail}->{head} does not match the endpoints of edge {edge}")]
    BadOrientation { edge: EdgeId, tail: VertexId, head: VertexId },
    #[error("edge {0} is both contracted and deleted")]
    OverlappingMinor(EdgeId),
    #[error("no weight for edge {0}")]
    MissingWeight(EdgeId),
    #[error("weight for edge {0} must be positive")]
    NonPositiveWeight(EdgeId),
    #[error("raised weight must exceed the current weight of edge {0}")]
    WeightNotIncreased(EdgeId),
    #[error("graph has no cut vertex")]
    NoCutVertex,
    #[error("A and B do not partition the edges other than e and f")]
    NotAPartition,
    #[error("exponent map is invalid: {0}")]
    InvalidExponents(String),
    #[error("vertex {vertex} has degree {actual}, expected {expected}")]
    WrongDegree { vertex: VertexId, actual: usize, expected: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no cubic or four-valent expansion applies: {0}")]
    DichotomyViolation(String),
    #[error("correspondence check failed in {rule}: {detail}")]
    Correspondence { rule: &'static str, detail: String },
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("polynomial parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
