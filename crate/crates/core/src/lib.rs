//! Holonomies, generalized connections and cylindrical functions on finite
//! path groupoids.
//!
//! The crate is `no_std` (with `alloc`): every routine is a pure function of
//! its inputs, randomness comes in through explicit seeds, and no IO happens
//! here. File formats and the command-line front-end live in
//! `holonomy-lab`.
//!
//! Layout:
//!
//! * [`pathgroupoid`]: graphs, reduced edge words, spanning trees,
//!   abelianization and segment chains.
//! * [`groups`]: compact matrix groups inside `U(n)`, exp/log, Haar
//!   sampling, quotients by finite central subgroups.
//! * [`connections`]: generalized and smooth connections, path-ordered
//!   integration, gauge actions, holonomy splitting and interpolation.
//! * [`cylindrical`]: cylindrical, representative and Wilson functions, the
//!   Haar mean-value map, trace separation.
//! * [`spectra`]: the spanning-tree factorization of `Hom(Λ, G)`, orbit
//!   normal forms, approximation and closure experiments.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod connections;
pub mod cylindrical;
pub mod groups;
pub mod linalg;
pub mod pathgroupoid;
pub mod spectra;

pub use groups::{Group, GroupDescriptor, GroupElement, GroupError, LieAlgebraElement};
pub use linalg::{CMatrix, C64};
pub use pathgroupoid::{EdgeId, Graph, Letter, Orientation, PathError, PathWord, VertexId};
