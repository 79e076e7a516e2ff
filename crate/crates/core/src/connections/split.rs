use alloc::vec::Vec;

use super::{BumpTerm, ConnectionError, SmoothConnection};
use crate::groups::{Group, GroupDescriptor, GroupElement};
use crate::linalg::CMatrix;
use crate::pathgroupoid::{Graph, PathWord};

/// Holonomies of the torus and semisimple parts of a connection valued in
/// `T^n × S`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitHolonomy {
    pub torus: GroupElement,
    pub semisimple: GroupElement,
}

impl SplitHolonomy {
    /// The two parts reassembled block-diagonally.
    pub fn combined(&self) -> CMatrix {
        CMatrix::block_diagonal(&[self.torus.matrix().clone(), self.semisimple.matrix().clone()])
    }
}

/// Splits `A = A_T + A_S` for `G = T^n × S` and integrates each part in its
/// own factor. Because the blocks commute, `H_A = H_{A_T} H_{A_S}`.
pub fn split_holonomy(a: &SmoothConnection, graph: &Graph, p: &PathWord, steps: usize) -> Result<SplitHolonomy, ConnectionError> {
    let GroupDescriptor::Product(factors) = a.group().descriptor() else {
        return Err(ConnectionError::NotSplittable);
    };
    let (GroupDescriptor::Torus(n), rest) = (factors[0].clone(), &factors[1..]) else {
        return Err(ConnectionError::NotSplittable);
    };
    if rest.is_empty() || !rest.iter().all(|f| f.is_semisimple()) {
        return Err(ConnectionError::NotSplittable);
    }
    let torus = Group::torus(n);
    let semisimple = if rest.len() == 1 {
        Group::new(rest[0].clone())?
    } else {
        Group::new(GroupDescriptor::Product(rest.to_vec()))?
    };
    let m = semisimple.dim();
    let mut torus_terms = Vec::new();
    let mut semisimple_terms = Vec::new();
    for t in a.terms() {
        let x = t.x().matrix();
        let xt = torus.algebra_element(x.block(0, n))?;
        let xs = semisimple.algebra_element(x.block(n, m))?;
        torus_terms.push(BumpTerm::new(xt, t.bump().clone(), t.direction().to_vec())?);
        semisimple_terms.push(BumpTerm::new(xs, t.bump().clone(), t.direction().to_vec())?);
    }
    let at = SmoothConnection::new(torus, torus_terms)?;
    let as_ = SmoothConnection::new(semisimple, semisimple_terms)?;
    Ok(SplitHolonomy { torus: at.holonomy(graph, p, steps)?, semisimple: as_.holonomy(graph, p, steps)? })
}
