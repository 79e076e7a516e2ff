//! Generalized and smooth connections and their holonomies.
//!
//! Transport follows `dU/dt = −A(γ′(t)) U`, so that a gauge transformation
//! acting by `A.g = g⁻¹Ag + g⁻¹dg` changes holonomies by
//! `H_{A.g}(γ) = g(γ(1))⁻¹ H_A(γ) g(γ(0))`.

mod gauge;
mod general;
mod interpolate;
mod smooth;
mod split;

pub use gauge::{gauge_act_smooth, GaugedConnection, SmoothGauge};
pub use general::{gauge_act_general, pushforward_hom, DiscreteGauge, GeneralizedConnection};
pub use interpolate::{interpolate_connection, FamilyMember, IndependentFamily, PrivateSegment};
pub use smooth::{bump_profile, Bump, BumpTerm, SmoothConnection, DEFAULT_STEPS};
pub use split::{split_holonomy, SplitHolonomy};

use crate::groups::GroupError;
use crate::pathgroupoid::{EdgeId, PathError, VertexId};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConnectionError {
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("connection has no value on edge {0}")]
    MissingEdge(EdgeId),
    #[error("value given for edge {0}, which is not in the graph")]
    UnknownEdge(EdgeId),
    #[error("gauge transformation has no value at vertex {0}")]
    MissingVertex(VertexId),
    #[error("invalid bump: {0}")]
    BadBump(&'static str),
    #[error("chart dimension mismatch: expected {expected}, found {found}")]
    ChartDimension { expected: usize, found: usize },
    #[error("step count must be at least 1")]
    ZeroSteps,
    #[error("holonomy splitting needs a product of a torus and semisimple blocks")]
    NotSplittable,
    #[error("family member {member} is not independent: {reason}")]
    Independence { member: usize, reason: &'static str },
    #[error("expected {expected} targets, found {found}")]
    TargetCount { expected: usize, found: usize },
    #[error("logarithm of target {member} failed after {attempts} branch shifts")]
    BranchFailure { member: usize, attempts: usize },
}
