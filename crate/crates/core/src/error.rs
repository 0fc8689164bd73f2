use thiserror::Error;

use crate::graph::VertexId;
use crate::matching::HolePattern;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("edge endpoint {index} out of range for a graph on {n} vertices")]
    EndpointOutOfRange { index: usize, n: usize },

    #[error("vertex {0} is not present in the graph")]
    UnknownVertex(VertexId),

    #[error("{0}-{1} is not an edge of the graph")]
    NotAnEdge(VertexId, VertexId),

    #[error("vertex {0} is covered by more than one matched edge")]
    DoublyMatched(VertexId),

    #[error("matching leaves {holes} holes; only perfect (0) and near-perfect (2) states are allowed")]
    NotInOmega { holes: usize },

    #[error("graph is not factor-critical")]
    NotFactorCritical,

    #[error("state space exceeds {cap} states; use trajectory simulation instead")]
    StateSpaceTooLarge { cap: usize },

    #[error("permanent of dimension {dim} exceeds the exact cap of {cap}; use an approximate backend")]
    DimensionOverCap { dim: usize, cap: usize },

    #[error("factor-critical component of order {order} exceeds k_max = {k_max} (vertices {vertices:?})")]
    OrderExceeded {
        order: usize,
        k_max: usize,
        vertices: Vec<VertexId>,
    },

    #[error("in sub-instance on vertices {vertices:?}: {inner}")]
    InSubInstance {
        vertices: Vec<VertexId>,
        inner: Box<Error>,
    },

    #[error("weight function has no positive weight for hole pattern {0}")]
    MissingWeight(HolePattern),

    #[error("vertex {0} is not a hole of the matching")]
    NotAHole(VertexId),

    #[error("vertex {0} does not lie on the blossom")]
    NotOnBlossom(VertexId),

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
