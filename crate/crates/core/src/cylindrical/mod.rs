//! Cylindrical, representative and Wilson functions, the Haar mean-value
//! map, and trace separation of generalized connections.

mod expr;
mod mean;
mod separation;

pub use expr::{evaluate, CylFunction, Expr, RepresentativeFunction, TupleFunction, WilsonFunction};
pub use mean::{invariance_check, ChunkSum, HaarMean, MeanEstimate, DEFAULT_CHUNK};
pub use separation::{separation_test, word_holonomy, SeparationVerdict, SEPARATION_TOLERANCE};

use crate::connections::ConnectionError;
use crate::pathgroupoid::VertexId;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CylError {
    #[error("expression refers to path {index} but only {paths} paths are given")]
    PathIndex { index: usize, paths: usize },
    #[error("entry ({row}, {col}) is outside a {dim}x{dim} matrix")]
    EntryIndex { row: usize, col: usize, dim: usize },
    #[error("expected {expected} holonomies, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("Wilson loop must be based at {expected}, found a path from {source_vertex} to {range}")]
    NotBasedLoop { expected: VertexId, source_vertex: VertexId, range: VertexId },
    #[error("sample count must be positive")]
    NoSamples,
    #[error("connections disagree on graph or group")]
    Incompatible,
    #[error(transparent)]
    Connection(#[from] ConnectionError),
}
