use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::CylError;
use crate::connections::GeneralizedConnection;
use crate::groups::GroupDescriptor;
use crate::linalg::{self, c64, CMatrix, C64};
use crate::pathgroupoid::PathWord;

/// Traces closer than this count as equal; conjugators with a larger
/// residual are rejected.
pub const SEPARATION_TOLERANCE: f64 = 1e-8;

/// Eigenvalues of the intertwiner Gram operator below this are treated as
/// zero.
const NULL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum SeparationVerdict {
    /// A word in the loop generators on which the traces differ. Words are
    /// signed one-based generator indices in written order: `[1, -2]` is
    /// `ℓ_1 ∘ ℓ_2⁻¹`.
    TracesDiffer { word: Vec<i64>, trace: C64, other_trace: C64 },
    /// A unitary `a` with `a⁻¹ H(ℓ) a = H′(ℓ)` on every generator.
    ConjugatorFound { conjugator: CMatrix, residual: f64, in_group: bool },
    /// Traces agree up to the length bound but no conjugator was found.
    Inconclusive { words_checked: usize, residual: Option<f64> },
}

/// Product `h_{w_1} ⋯ h_{w_k}` for a signed one-based word.
pub fn word_holonomy(values: &[CMatrix], word: &[i64]) -> CMatrix {
    let n = values.first().map_or(0, |v| v.dim());
    let mut acc = CMatrix::identity(n);
    for &w in word {
        let h = &values[w.unsigned_abs() as usize - 1];
        acc = if w > 0 { &acc * h } else { &acc * &h.adjoint() };
    }
    acc
}

struct WordSearch<'a> {
    left: &'a [CMatrix],
    right: &'a [CMatrix],
    checked: usize,
}

impl WordSearch<'_> {
    /// Depth-first over reduced words of exactly `remaining` more letters.
    fn run(&mut self, word: &mut Vec<i64>, l: &CMatrix, r: &CMatrix, remaining: usize) -> Option<SeparationVerdict> {
        if remaining == 0 {
            self.checked += 1;
            let (t, t2) = (l.trace(), r.trace());
            if (t - t2).norm() > SEPARATION_TOLERANCE {
                return Some(SeparationVerdict::TracesDiffer { word: word.clone(), trace: t, other_trace: t2 });
            }
            return None;
        }
        let gens = self.left.len() as i64;
        for g in (1..=gens).flat_map(|g| [g, -g]) {
            if word.last() == Some(&-g) {
                continue;
            }
            let i = g.unsigned_abs() as usize - 1;
            let (lg, rg) = if g > 0 { (self.left[i].clone(), self.right[i].clone()) } else { (self.left[i].adjoint(), self.right[i].adjoint()) };
            word.push(g);
            let found = self.run(word, &(l * &lg), &(r * &rg), remaining - 1);
            word.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// Compares `H` and `H′` on the loops generated by `loops`.
///
/// Reduced words are enumerated by increasing length up to `max_len`; the
/// first word with differing traces is a witness. When all traces agree,
/// a conjugator is sought as a unitary intertwiner: the null space of
/// `Σ_i T_i†T_i`, `T_i(a) = h_i a − a h′_i`, is combined with seeded random
/// coefficients and its polar factor taken.
pub fn separation_test(
    h: &GeneralizedConnection,
    h2: &GeneralizedConnection,
    loops: &[PathWord],
    max_len: usize,
    seed: u64,
) -> Result<SeparationVerdict, CylError> {
    if h.group() != h2.group() || h.graph() != h2.graph() {
        return Err(CylError::Incompatible);
    }
    let left: Vec<CMatrix> = loops.iter().map(|p| Ok(h.holonomy(p)?.into_matrix())).collect::<Result<_, CylError>>()?;
    let right: Vec<CMatrix> = loops.iter().map(|p| Ok(h2.holonomy(p)?.into_matrix())).collect::<Result<_, CylError>>()?;
    let n = h.group().dim();
    let mut search = WordSearch { left: &left, right: &right, checked: 0 };
    let id = CMatrix::identity(n);
    for len in 1..=max_len {
        if let Some(v) = search.run(&mut Vec::new(), &id, &id, len) {
            return Ok(v);
        }
    }
    let words_checked = search.checked;
    let Some(a) = intertwiner(&left, &right, seed) else {
        return Ok(SeparationVerdict::Inconclusive { words_checked, residual: None });
    };
    let a = match h.group().descriptor() {
        GroupDescriptor::SpecialUnitary(n) => {
            let det = a.det();
            a.scale(C64::from_polar(1.0, -det.arg() / *n as f64))
        }
        _ => a,
    };
    let residual = conjugation_residual(&a, &left, &right);
    if residual > SEPARATION_TOLERANCE {
        return Ok(SeparationVerdict::Inconclusive { words_checked, residual: Some(residual) });
    }
    let in_group = h.group().contains(&a);
    Ok(SeparationVerdict::ConjugatorFound { conjugator: a, residual, in_group })
}

/// `max_i ‖a⁻¹ h_i a − h′_i‖_F`.
pub(crate) fn conjugation_residual(a: &CMatrix, left: &[CMatrix], right: &[CMatrix]) -> f64 {
    left.iter()
        .zip(right)
        .map(|(h, h2)| (&(&a.adjoint() * h) * a).distance(h2))
        .fold(0.0, f64::max)
}

/// A unitary `a` with `h_i a = a h′_i` for all `i`, if the intertwiner space
/// contains an invertible element.
fn intertwiner(left: &[CMatrix], right: &[CMatrix], seed: u64) -> Option<CMatrix> {
    let n = left.first()?.dim();
    let nn = n * n;
    // Vectorize a row-major: a_{pq} ↦ index p n + q.
    let mut gram = CMatrix::zeros(nn);
    for (h, h2) in left.iter().zip(right) {
        let mut t = CMatrix::zeros(nn);
        for p in 0..n {
            for q in 0..n {
                let row = p * n + q;
                for r in 0..n {
                    t[(row, r * n + q)] += h[(p, r)];
                    t[(row, p * n + r)] -= h2[(r, q)];
                }
            }
        }
        gram = &gram + &(&t.adjoint() * &t);
    }
    let eig = linalg::hermitian_eigen(&gram);
    let null: Vec<usize> = (0..nn).filter(|&k| eig.values[k] < NULL_TOLERANCE).collect();
    if null.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = CMatrix::zeros(n);
    for &k in &null {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        let w = c64(re, im);
        for p in 0..n {
            for q in 0..n {
                a[(p, q)] += w * eig.vectors[(p * n + q, k)];
            }
        }
    }
    if a.det().norm() < 1e-12 * a.frobenius_norm().powi(n as i32) {
        return None;
    }
    Some(linalg::polar_unitary(&a))
}
