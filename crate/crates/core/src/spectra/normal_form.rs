use alloc::vec::Vec;
use core::cmp::Ordering;

#[allow(unused_imports)]
use num_traits::Float;

use super::theta::ThetaData;
use super::SpectraError;
use crate::connections::GeneralizedConnection;
use crate::groups::GroupDescriptor;
use crate::linalg::{self, c64, CMatrix, C64, LEX_TOLERANCE};

/// Eigenvalues closer than this count as degenerate.
const SPECTRAL_GAP: f64 = 1e-6;
/// Off-diagonal entries smaller than this are not used to fix phases.
const PHASE_ENTRY: f64 = 1e-6;

/// Canonical representative of the `Ad G` orbit of the loop values.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRepresentative {
    pub loops: Vec<CMatrix>,
    /// Set when some block had no nondegenerate spectrum to diagonalize or
    /// the diagonal stabilizer could not be fixed completely. The
    /// representative is then not guaranteed to be orbit-invariant.
    pub degenerate: bool,
}

/// `Q_⋆`: conjugation normal form of `H_⋆`, constant on gauge orbits.
///
/// Each non-abelian block is conjugated so that the first generator with a
/// nondegenerate spectrum becomes diagonal with phases in increasing order
/// (falling back to a generic Hermitian combination of all generators). The
/// remaining diagonal freedom is spent making the first usable off-diagonal
/// entries real and positive. Abelian blocks are left as they are. For
/// quotient groups the lexicographically smallest normal form over all
/// kernel translates is returned.
pub fn q_star(h: &GeneralizedConnection, t: &ThetaData) -> Result<OrbitRepresentative, SpectraError> {
    let pair = super::theta(h, t)?;
    let loops: Vec<CMatrix> = pair.loops.into_iter().map(|g| g.into_matrix()).collect();
    let group = h.group();
    let base = group.base();
    let blocks = base.descriptor().blocks();
    let Some(kernel) = group.kernel() else {
        return Ok(normal_form(&blocks, &loops));
    };
    let mut best: Option<OrbitRepresentative> = None;
    let mut choice = alloc::vec![0usize; loops.len()];
    loop {
        let translated: Vec<CMatrix> = loops.iter().zip(&choice).map(|(m, &k)| m * &kernel[k]).collect();
        let cand = normal_form(&blocks, &translated);
        let better = match &best {
            None => true,
            Some(b) => tuple_cmp(&cand.loops, &b.loops) == Ordering::Less,
        };
        if better {
            best = Some(cand);
        }
        if !advance(&mut choice, kernel.len()) {
            break;
        }
    }
    Ok(best.expect("at least one translate"))
}

/// Odometer step over `{0..base}^len`; false once it wraps around.
pub(crate) fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn tuple_cmp(a: &[CMatrix], b: &[CMatrix]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.lex_cmp(y, LEX_TOLERANCE) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

fn normal_form(blocks: &[(usize, GroupDescriptor)], loops: &[CMatrix]) -> OrbitRepresentative {
    let mut out = loops.to_vec();
    let mut degenerate = false;
    for (offset, desc) in blocks {
        let n = desc.dim();
        if desc.is_abelian() || n < 2 || loops.is_empty() {
            continue;
        }
        let parts: Vec<CMatrix> = loops.iter().map(|m| m.block(*offset, n)).collect();
        let (conj, ok) = block_conjugator(&parts);
        degenerate |= !ok;
        for (m, p) in out.iter_mut().zip(&parts) {
            let q = &(&conj.adjoint() * p) * &conj;
            for i in 0..n {
                for j in 0..n {
                    m[(offset + i, offset + j)] = q[(i, j)];
                }
            }
        }
    }
    OrbitRepresentative { loops: out, degenerate }
}

fn has_gap(values: &[C64]) -> bool {
    values.iter().enumerate().all(|(i, a)| values[i + 1..].iter().all(|b| (a - b).norm() > SPECTRAL_GAP))
}

/// Unitary `v` bringing the tuple to normal form via `v† m v`, and whether
/// the normal form is fully determined.
fn block_conjugator(parts: &[CMatrix]) -> (CMatrix, bool) {
    let n = parts[0].dim();
    let mut v = None;
    for m in parts {
        let eig = linalg::unitary_eigen(m);
        if has_gap(&eig.values) {
            let phases = eig.phases();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| phases[a].total_cmp(&phases[b]));
            v = Some(permute_columns(&eig.vectors, &order));
            break;
        }
    }
    if v.is_none() {
        // Generic Hermitian combination; its spectrum is Ad-invariant and
        // ascending order is canonical.
        let mut k = CMatrix::zeros(n);
        for (j, m) in parts.iter().enumerate() {
            let a = 1.0 / (j as f64 + 1.7);
            let b = 1.0 / (j as f64 + 2.9);
            let herm = m.hermitian_part();
            let anti = m.skew_hermitian_part().scale(c64(0.0, -1.0));
            k = &k + &(&herm.scale_real(a) + &anti.scale_real(b));
        }
        let eig = linalg::hermitian_eigen(&k);
        if eig.values.windows(2).all(|w| w[1] - w[0] > SPECTRAL_GAP) {
            v = Some(eig.vectors);
        }
    }
    let Some(v) = v else {
        return (CMatrix::identity(n), false);
    };
    // Residual freedom: a diagonal phase matrix d acting as d† m d, which
    // multiplies entry (i, j) by conj(d_i) d_j.
    let conj_parts: Vec<CMatrix> = parts.iter().map(|m| &(&v.adjoint() * m) * &v).collect();
    let mut d: Vec<Option<C64>> = alloc::vec![None; n];
    d[0] = Some(c64(1.0, 0.0));
    let mut progress = true;
    while progress && d.iter().any(Option::is_none) {
        progress = false;
        'scan: for m in &conj_parts {
            for i in 0..n {
                for j in 0..n {
                    if i == j || m[(i, j)].norm() <= PHASE_ENTRY {
                        continue;
                    }
                    let u = m[(i, j)] / m[(i, j)].norm();
                    match (d[i], d[j]) {
                        // conj(d_i) u d_j real positive.
                        (Some(di), None) => d[j] = Some(di * u.conj()),
                        (None, Some(dj)) => d[i] = Some(dj * u),
                        _ => continue,
                    }
                    progress = true;
                    break 'scan;
                }
            }
        }
    }
    let complete = d.iter().all(Option::is_some);
    let diag: Vec<C64> = d.into_iter().map(|x| x.unwrap_or(c64(1.0, 0.0))).collect();
    (&v * &CMatrix::from_diagonal(&diag), complete)
}

fn permute_columns(m: &CMatrix, order: &[usize]) -> CMatrix {
    let n = m.dim();
    let mut out = CMatrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            out[(i, new)] = m[(i, old)];
        }
    }
    out
}
