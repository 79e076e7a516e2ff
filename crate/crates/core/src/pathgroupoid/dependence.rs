use alloc::vec::Vec;

use super::graph::reduce_letters;
use super::word::{Orientation, PathWord};

/// One factor of a factorization: family member `index`, possibly inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factor {
    pub index: usize,
    pub orientation: Orientation,
}

/// Searches for `p = f_{a1}^{±} ∘ … ∘ f_{ak}^{±}` with `k ≤ bound`, factors
/// listed in written order (the last factor is traversed first). The search
/// is exhaustive up to `bound` and returns a shortest factorization.
pub fn depends_on(p: &PathWord, family: &[PathWord], bound: usize) -> Option<Vec<Factor>> {
    if p.is_unit() {
        return Some(Vec::new());
    }
    let mut stack = Vec::new();
    for depth in 1..=bound {
        if search(p, family, depth, p.source(), &[], &mut stack) {
            stack.reverse();
            return Some(stack);
        }
    }
    None
}

fn search(
    target: &PathWord,
    family: &[PathWord],
    remaining: usize,
    at: crate::pathgroupoid::VertexId,
    word: &[crate::pathgroupoid::Letter],
    stack: &mut Vec<Factor>,
) -> bool {
    if remaining == 0 {
        return at == target.range() && word == target.letters();
    }
    for (index, f) in family.iter().enumerate() {
        for orientation in [Orientation::Forward, Orientation::Backward] {
            if let Some(prev) = stack.last() {
                if prev.index == index && prev.orientation != orientation {
                    continue;
                }
            }
            let (src, dst, letters) = match orientation {
                Orientation::Forward => (f.source(), f.range(), f.letters().to_vec()),
                Orientation::Backward => {
                    let inv = f.inverse();
                    (inv.source(), inv.range(), inv.letters().to_vec())
                }
            };
            if src != at {
                continue;
            }
            let mut next = word.to_vec();
            next.extend_from_slice(&letters);
            let next = reduce_letters(&next);
            stack.push(Factor { index, orientation });
            if search(target, family, remaining - 1, dst, &next, stack) {
                return true;
            }
            stack.pop();
        }
    }
    false
}

/// No member factors through the others within `bound` factors.
pub fn is_independent(family: &[PathWord], bound: usize) -> bool {
    (0..family.len()).all(|i| {
        let others: Vec<PathWord> = family.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        depends_on(&family[i], &others, bound).is_none()
    })
}
