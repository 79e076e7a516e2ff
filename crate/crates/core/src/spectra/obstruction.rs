use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::SpectraError;
use crate::connections::GeneralizedConnection;
use crate::groups::Group;
use crate::linalg::{CMatrix, C64};
use crate::pathgroupoid::{segment_chain, ExponentVector, Graph, PathWord, SegmentChain};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructionVerdict {
    /// Every smooth torus connection has trivial holonomy on the loop, yet
    /// the loop is not the unit: a generalized connection can be nontrivial
    /// there.
    Obstructed,
    Unobstructed,
}

/// Explicit homomorphisms separating an obstructed loop from the unit.
#[derive(Debug, Clone)]
pub struct ObstructionWitness {
    /// Value of the free assignment sending the loop, taken as a free
    /// generator of the loop group, to `e^{iπ}`.
    pub assignment: C64,
    /// A `U(1)` generalized connection on the graph with holonomy `e^{iπ}`
    /// on the loop. Exists whenever the loop's edge exponent vector is
    /// nonzero; a word in the graph's own loop generators with zero
    /// exponents is killed by every torus homomorphism at this level.
    pub connection: Option<GeneralizedConnection>,
}

#[derive(Debug, Clone)]
pub struct ObstructionEntry {
    pub path: PathWord,
    /// Net traversal count of each edge.
    pub abelianization: ExponentVector,
    /// Net traversal count of each geometric segment.
    pub chain: SegmentChain,
    pub verdict: ObstructionVerdict,
    pub witness: Option<ObstructionWitness>,
}

/// Classifies loops by whether Abelian smooth holonomy can see them: smooth
/// torus holonomy depends only on the segment chain, so a non-unit loop with
/// zero chain is invisible to every smooth connection.
pub fn abelian_obstruction_witness(graph: &Arc<Graph>, loops: &[PathWord]) -> Result<Vec<ObstructionEntry>, SpectraError> {
    let circle = Group::torus(1);
    loops
        .iter()
        .map(|p| {
            graph.check_path(p)?;
            let abelianization = p.abelianize();
            let chain = segment_chain(graph, p);
            let obstructed = !p.is_unit() && chain.is_empty();
            let witness = if obstructed {
                let connection = match abelianization.iter().find(|(_, n)| *n != 0) {
                    Some((e0, n0)) => {
                        let mut values = BTreeMap::new();
                        for e in graph.edge_ids() {
                            let phase = if e == e0 { PI / n0 as f64 } else { 0.0 };
                            values.insert(e, circle.from_trusted(CMatrix::from_diagonal(&[C64::from_polar(1.0, phase)])));
                        }
                        Some(GeneralizedConnection::new(graph.clone(), circle.clone(), values)?)
                    }
                    None => None,
                };
                Some(ObstructionWitness { assignment: C64::from_polar(1.0, PI), connection })
            } else {
                None
            };
            let verdict = if obstructed { ObstructionVerdict::Obstructed } else { ObstructionVerdict::Unobstructed };
            Ok(ObstructionEntry { path: p.clone(), abelianization, chain, verdict, witness })
        })
        .collect()
}
