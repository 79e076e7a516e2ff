//! Finite-graph model of the path groupoid.
//!
//! Paths are reduced words over oriented edges. Parametrizations never
//! appear: edges are symbols, and the optional curve samples attached to an
//! edge are only used when a smooth connection is integrated along it.

mod chain;
mod dependence;
mod graph;
mod tree;
mod word;

pub use chain::{segment_chain, SegmentChain, SegmentKey};
pub use dependence::{depends_on, is_independent, Factor};
pub use graph::{Edge, EdgeId, Graph, Point, Vertex, VertexId};
pub use tree::{spanning_tree, SpanningTree};
pub use word::{ExponentVector, Letter, Orientation, PathWord};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PathError {
    #[error("letter {index} does not start where the previous letter ends")]
    NotComposable { index: usize },
    #[error("unknown edge {edge} at letter {index}")]
    UnknownEdge { index: usize, edge: EdgeId },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("paths do not compose: expected endpoint {expected}, found {found}")]
    EndpointMismatch { expected: VertexId, found: VertexId },
    #[error("an empty word needs an explicit vertex")]
    EmptyWithoutVertex,
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("edge id 0 is reserved")]
    ZeroEdgeId,
    #[error("graph is disconnected: {reached} of {total} vertices reachable from the basepoint")]
    Disconnected { reached: usize, total: usize },
    #[error("edge {edge} has an invalid curve: {reason}")]
    BadCurve { edge: EdgeId, reason: &'static str },
    #[error("chart points of mixed dimension ({expected} vs {found})")]
    ChartDimension { expected: usize, found: usize },
    #[error("edge {0} has neither a curve nor embedded endpoints")]
    NoGeometry(EdgeId),
}
