//! Finite-level spectrum machinery: the spanning-tree factorization
//! `Hom(Λ, G) ≅ Hom(Λ_⋆, G) × G^{M∖⋆}`, Ad-orbit normal forms of loop data,
//! approximation of generalized connections by smooth ones, the Abelian
//! obstruction, and closure membership for `(T^n × S)/K`.

mod approximation;
mod closure;
mod normal_form;
mod obstruction;
mod theta;

pub use approximation::{approximation_experiment, ApproximationReport};
pub use closure::{closure_membership, zero_chain_relations, BlockVerdict, ClosureDescriptor, ClosureMode, ClosureReport, ClosureVerdict, DEFAULT_BOUND};
pub use normal_form::{q_star, OrbitRepresentative};
pub use obstruction::{abelian_obstruction_witness, ObstructionEntry, ObstructionVerdict, ObstructionWitness};
pub use theta::{theta, theta_inverse, ThetaData, ThetaPair};

use crate::connections::ConnectionError;
use crate::groups::GroupError;
use crate::pathgroupoid::{PathError, VertexId};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectraError {
    #[error(transparent)]
    Connection(#[from] ConnectionError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("frame at the basepoint is {distance:.3e} away from the identity")]
    FrameNotIdentity { distance: f64 },
    #[error("frame has no value at vertex {0}")]
    MissingFrame(VertexId),
    #[error("expected {expected} loop values, found {found}")]
    LoopCount { expected: usize, found: usize },
    #[error("connection lives on a different graph than the spanning-tree data")]
    GraphMismatch,
    #[error("closure mode does not fit the group: {0}")]
    ModeMismatch(&'static str),
}
