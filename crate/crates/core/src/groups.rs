//! Compact matrix groups realized inside a single `U(n)`.
//!
//! A [`Group`] wraps a validated [`GroupDescriptor`]. Every element carries
//! its group, so mixing elements of different groups is caught at the call
//! site instead of producing a silently wrong product. Products embed their
//! factors block-diagonally; quotients `(T^n × S)/K` by a finite central `K`
//! store the canonical coset representative in the base group.

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, c64, CMatrix, C64, LEX_TOLERANCE};

/// Membership tolerance for `‖U†U − I‖_F`.
pub const UNITARY_TOLERANCE: f64 = 1e-10;
/// Compositions drifting past this are pulled back by polar decomposition.
pub const DRIFT_TOLERANCE: f64 = 1e-12;
/// Eigenvalues closer than this to `−1` make the principal logarithm ambiguous.
pub const BRANCH_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GroupError {
    #[error("elements belong to different groups")]
    DescriptorMismatch,
    #[error("matrix dimension {found} does not match group dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not a member of the group: {0}")]
    NotMember(&'static str),
    #[error("matrix is not in the Lie algebra: {0}")]
    NotInAlgebra(&'static str),
    #[error("invalid group descriptor: {0}")]
    InvalidDescriptor(&'static str),
    #[error("logarithm is ambiguous: eigenvalue within {distance:.3e} of -1; retarget or shift the branch cut")]
    BranchCut { distance: f64 },
}

/// Kind of compact group, as data.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupDescriptor {
    Unitary(usize),
    SpecialUnitary(usize),
    /// Diagonal unitaries of size `n`.
    Torus(usize),
    /// Factors embedded block-diagonally, in order.
    Product(Vec<GroupDescriptor>),
    /// `base / K` with `base` a product and `K` a finite central subgroup.
    Quotient { base: Box<GroupDescriptor>, kernel: Vec<CMatrix> },
}

impl GroupDescriptor {
    pub fn dim(&self) -> usize {
        match self {
            GroupDescriptor::Unitary(n) | GroupDescriptor::SpecialUnitary(n) | GroupDescriptor::Torus(n) => *n,
            GroupDescriptor::Product(fs) => fs.iter().map(|f| f.dim()).sum(),
            GroupDescriptor::Quotient { base, .. } => base.dim(),
        }
    }

    /// Factors of a product with their block offsets; a simple group is its
    /// own single factor.
    pub fn blocks(&self) -> Vec<(usize, GroupDescriptor)> {
        match self {
            GroupDescriptor::Product(fs) => {
                let mut offset = 0;
                fs.iter()
                    .map(|f| {
                        let o = offset;
                        offset += f.dim();
                        (o, f.clone())
                    })
                    .collect()
            }
            GroupDescriptor::Quotient { base, .. } => base.blocks(),
            other => alloc::vec![(0, other.clone())],
        }
    }

    /// Groups whose adjoint action is trivial.
    pub fn is_abelian(&self) -> bool {
        match self {
            GroupDescriptor::Torus(_) => true,
            GroupDescriptor::Unitary(n) | GroupDescriptor::SpecialUnitary(n) => *n <= 1,
            GroupDescriptor::Product(fs) => fs.iter().all(|f| f.is_abelian()),
            GroupDescriptor::Quotient { base, .. } => base.is_abelian(),
        }
    }

    /// Semisimple here means a product of `SU(n)` blocks.
    pub fn is_semisimple(&self) -> bool {
        match self {
            GroupDescriptor::SpecialUnitary(n) => *n >= 2,
            GroupDescriptor::Product(fs) => !fs.is_empty() && fs.iter().all(|f| f.is_semisimple()),
            _ => false,
        }
    }

    fn validate(&self) -> Result<(), GroupError> {
        match self {
            GroupDescriptor::Unitary(n) | GroupDescriptor::SpecialUnitary(n) | GroupDescriptor::Torus(n) => {
                if *n == 0 {
                    return Err(GroupError::InvalidDescriptor("dimension must be positive"));
                }
            }
            GroupDescriptor::Product(fs) => {
                if fs.is_empty() {
                    return Err(GroupError::InvalidDescriptor("product needs at least one factor"));
                }
                for f in fs {
                    if matches!(f, GroupDescriptor::Quotient { .. }) {
                        return Err(GroupError::InvalidDescriptor("quotients cannot be product factors"));
                    }
                    f.validate()?;
                }
            }
            GroupDescriptor::Quotient { base, kernel } => {
                if !matches!(**base, GroupDescriptor::Product(_)) {
                    return Err(GroupError::InvalidDescriptor("quotient base must be a product"));
                }
                base.validate()?;
                if kernel.is_empty() {
                    return Err(GroupError::InvalidDescriptor("kernel must contain the identity"));
                }
                let n = base.dim();
                for k in kernel {
                    if k.dim() != n {
                        return Err(GroupError::InvalidDescriptor("kernel element has wrong dimension"));
                    }
                    if !contains(base, k, UNITARY_TOLERANCE) {
                        return Err(GroupError::InvalidDescriptor("kernel element is not in the base group"));
                    }
                    if !is_central(base, k) {
                        return Err(GroupError::InvalidDescriptor("kernel element is not central"));
                    }
                }
                let id = CMatrix::identity(n);
                if !kernel.iter().any(|k| k.distance(&id) < 1e-9) {
                    return Err(GroupError::InvalidDescriptor("kernel must contain the identity"));
                }
                for a in kernel {
                    for b in kernel {
                        let ab = a * b;
                        if !kernel.iter().any(|k| k.distance(&ab) < 1e-9) {
                            return Err(GroupError::InvalidDescriptor("kernel is not closed under multiplication"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn is_central(base: &GroupDescriptor, k: &CMatrix) -> bool {
    base.blocks().iter().all(|(offset, f)| {
        let b = k.block(*offset, f.dim());
        match f {
            GroupDescriptor::Torus(_) => true,
            _ => {
                let s = b[(0, 0)];
                b.distance(&CMatrix::identity(f.dim()).scale(s)) < 1e-9
            }
        }
    })
}

fn simple_contains(d: &GroupDescriptor, m: &CMatrix, tol: f64) -> bool {
    match d {
        GroupDescriptor::Unitary(_) => true,
        GroupDescriptor::SpecialUnitary(_) => (m.det() - c64(1.0, 0.0)).norm() <= tol.max(1e-10) * 10.0,
        GroupDescriptor::Torus(_) => m.is_diagonal(tol),
        _ => false,
    }
}

/// Membership of `m` in the base group described by `d` (quotients are
/// checked against their base).
fn contains(d: &GroupDescriptor, m: &CMatrix, tol: f64) -> bool {
    if m.dim() != d.dim() || m.unitarity_defect() > tol {
        return false;
    }
    match d {
        GroupDescriptor::Product(_) | GroupDescriptor::Quotient { .. } => {
            let blocks = d.blocks();
            let mut mask = CMatrix::block_diagonal(
                &blocks.iter().map(|(o, f)| m.block(*o, f.dim())).collect::<Vec<_>>(),
            );
            mask = &mask - m;
            if mask.max_abs() > tol {
                return false;
            }
            blocks.iter().all(|(o, f)| simple_contains(f, &m.block(*o, f.dim()), tol))
        }
        simple => simple_contains(simple, m, tol),
    }
}

/// A validated compact group. Cheap to clone.
#[derive(Clone, Debug)]
pub struct Group(Arc<GroupDescriptor>);

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Group {
    pub fn new(descriptor: GroupDescriptor) -> Result<Self, GroupError> {
        descriptor.validate()?;
        Ok(Group(Arc::new(descriptor)))
    }

    pub fn unitary(n: usize) -> Self {
        Self::new(GroupDescriptor::Unitary(n)).expect("U(n) with n > 0")
    }

    pub fn special_unitary(n: usize) -> Self {
        Self::new(GroupDescriptor::SpecialUnitary(n)).expect("SU(n) with n > 0")
    }

    pub fn torus(n: usize) -> Self {
        Self::new(GroupDescriptor::Torus(n)).expect("T^n with n > 0")
    }

    /// `U(n)` presented as `(U(1) × SU(n)) / Z_n`, the central `Z_n` embedded
    /// as `(ω, ω^{-1} I)`.
    pub fn unitary_as_quotient(n: usize) -> Self {
        let base = GroupDescriptor::Product(alloc::vec![GroupDescriptor::Torus(1), GroupDescriptor::SpecialUnitary(n)]);
        let kernel = (0..n)
            .map(|k| {
                let w = root_of_unity(k, n);
                CMatrix::block_diagonal(&[CMatrix::from_diagonal(&[w]), CMatrix::identity(n).scale(w.conj())])
            })
            .collect();
        Self::new(GroupDescriptor::Quotient { base: Box::new(base), kernel }).expect("valid quotient")
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::new_unchecked(self.clone(), self.canonical(CMatrix::identity(self.dim())))
    }

    /// Validates `matrix` and returns the element it represents.
    pub fn element(&self, matrix: CMatrix) -> Result<GroupElement, GroupError> {
        if matrix.dim() != self.dim() {
            return Err(GroupError::DimensionMismatch { expected: self.dim(), found: matrix.dim() });
        }
        if matrix.unitarity_defect() > UNITARY_TOLERANCE {
            return Err(GroupError::NotMember("not unitary"));
        }
        if !contains(&self.0, &matrix, UNITARY_TOLERANCE) {
            return Err(GroupError::NotMember("violates the group's structural constraints"));
        }
        Ok(GroupElement::new_unchecked(self.clone(), self.canonical(matrix)))
    }

    /// Wraps a matrix already known to be a member (e.g. computed from other
    /// members); applies coset canonicalization and drift repair.
    pub fn from_trusted(&self, matrix: CMatrix) -> GroupElement {
        let m = if matrix.unitarity_defect() > DRIFT_TOLERANCE { self.reunitarize(&matrix) } else { matrix };
        GroupElement::new_unchecked(self.clone(), self.canonical(m))
    }

    pub fn contains(&self, matrix: &CMatrix) -> bool {
        contains(&self.0, matrix, UNITARY_TOLERANCE)
    }

    pub fn kernel(&self) -> Option<&[CMatrix]> {
        match &*self.0 {
            GroupDescriptor::Quotient { kernel, .. } => Some(kernel),
            _ => None,
        }
    }

    /// The group in which representatives live: the base of a quotient,
    /// otherwise the group itself.
    pub fn base(&self) -> Group {
        match &*self.0 {
            GroupDescriptor::Quotient { base, .. } => Group(Arc::new((**base).clone())),
            _ => self.clone(),
        }
    }

    /// Factor groups with their block offsets.
    pub fn factors(&self) -> Vec<(usize, Group)> {
        self.0.blocks().into_iter().map(|(o, d)| (o, Group(Arc::new(d)))).collect()
    }

    /// Canonical representative of the coset `m K`: the lexicographically
    /// smallest translate (row-major, real before imaginary, ties below
    /// 1e-9). Identity on non-quotient groups.
    pub fn canonical(&self, m: CMatrix) -> CMatrix {
        match &*self.0 {
            GroupDescriptor::Quotient { kernel, .. } => {
                let mut best = m.clone();
                for k in kernel {
                    let cand = &m * k;
                    if cand.lex_cmp(&best, LEX_TOLERANCE) == Ordering::Less {
                        best = cand;
                    }
                }
                best
            }
            _ => m,
        }
    }

    /// Pulls a drifted matrix back onto the group: polar factor, then
    /// block-wise structural projection.
    pub fn reunitarize(&self, m: &CMatrix) -> CMatrix {
        let blocks: Vec<CMatrix> = self
            .0
            .blocks()
            .iter()
            .map(|(o, f)| {
                let b = m.block(*o, f.dim());
                match f {
                    GroupDescriptor::Torus(_) => {
                        let d: Vec<C64> = b.diagonal().iter().map(|z| *z / z.norm()).collect();
                        CMatrix::from_diagonal(&d)
                    }
                    GroupDescriptor::SpecialUnitary(n) => {
                        let p = linalg::polar_unitary(&b);
                        let det = p.det();
                        let root = C64::from_polar(1.0, -det.arg() / *n as f64);
                        p.scale(root)
                    }
                    _ => linalg::polar_unitary(&b),
                }
            })
            .collect();
        CMatrix::block_diagonal(&blocks)
    }

    /// Haar sample from a fixed seed.
    pub fn haar_sample(&self, seed: u64) -> GroupElement {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample(&mut rng)
    }

    /// Haar sample drawing from `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        let m = self.sample_matrix(rng);
        GroupElement::new_unchecked(self.clone(), self.canonical(m))
    }

    /// Haar-distributed representative matrix (not canonicalized).
    pub fn sample_matrix<R: Rng + ?Sized>(&self, rng: &mut R) -> CMatrix {
        let blocks: Vec<CMatrix> = self.0.blocks().iter().map(|(_, f)| sample_simple(f, rng)).collect();
        if blocks.len() == 1 {
            blocks.into_iter().next().unwrap()
        } else {
            CMatrix::block_diagonal(&blocks)
        }
    }

    /// Validates a Lie algebra element.
    pub fn algebra_element(&self, matrix: CMatrix) -> Result<LieAlgebraElement, GroupError> {
        if matrix.dim() != self.dim() {
            return Err(GroupError::DimensionMismatch { expected: self.dim(), found: matrix.dim() });
        }
        let scale = 1.0 + matrix.max_abs();
        if matrix.skew_hermitian_defect() > 1e-10 * scale {
            return Err(GroupError::NotInAlgebra("not skew-Hermitian"));
        }
        let projected = self.project_algebra(&matrix);
        if projected.distance(&matrix) > 1e-10 * scale {
            return Err(GroupError::NotInAlgebra("violates the algebra's structural constraints"));
        }
        Ok(LieAlgebraElement { group: self.clone(), matrix: projected })
    }

    /// Orthogonal projection of an arbitrary matrix onto the Lie algebra.
    pub fn project_algebra(&self, m: &CMatrix) -> CMatrix {
        let blocks: Vec<CMatrix> = self
            .0
            .blocks()
            .iter()
            .map(|(o, f)| {
                let b = m.block(*o, f.dim()).skew_hermitian_part();
                match f {
                    GroupDescriptor::Torus(_) => {
                        let d: Vec<C64> = b.diagonal().iter().map(|z| c64(0.0, z.im)).collect();
                        CMatrix::from_diagonal(&d)
                    }
                    GroupDescriptor::SpecialUnitary(n) => {
                        let shift = b.trace() / (*n as f64);
                        &b - &CMatrix::identity(*n).scale(shift)
                    }
                    _ => b,
                }
            })
            .collect();
        CMatrix::block_diagonal(&blocks)
    }

    /// `exp` of a raw algebra matrix, canonicalized into the group.
    pub fn exp_matrix(&self, x: &CMatrix) -> CMatrix {
        let blocks: Vec<CMatrix> = self
            .0
            .blocks()
            .iter()
            .map(|(o, f)| linalg::exp_skew_hermitian(&x.block(*o, f.dim())))
            .collect();
        self.canonical(CMatrix::block_diagonal(&blocks))
    }

    /// Lie algebra logarithm with the branch cut rotated by `shift` radians:
    /// eigenphases are taken in `(−π + shift, π + shift]`. For `SU(n)` blocks
    /// whole turns are moved between eigenphases so the result is traceless.
    pub fn log_matrix(&self, g: &CMatrix, shift: f64) -> Result<CMatrix, GroupError> {
        let mut blocks = Vec::new();
        for (o, f) in self.0.blocks() {
            let b = g.block(o, f.dim());
            blocks.push(log_simple(&f, &b, shift)?);
        }
        Ok(CMatrix::block_diagonal(&blocks))
    }
}

/// `exp(2πi k / n)` with components that should vanish snapped to zero, so
/// that `±1` and `±i` are exact.
fn root_of_unity(k: usize, n: usize) -> C64 {
    let w = C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
    let snap = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    c64(snap(w.re), snap(w.im))
}

fn sample_simple<R: Rng + ?Sized>(d: &GroupDescriptor, rng: &mut R) -> CMatrix {
    match d {
        GroupDescriptor::Torus(n) => {
            let diag: Vec<C64> = (0..*n).map(|_| C64::from_polar(1.0, rng.random::<f64>() * 2.0 * PI)).collect();
            CMatrix::from_diagonal(&diag)
        }
        GroupDescriptor::Unitary(n) => ginibre_q(*n, rng),
        GroupDescriptor::SpecialUnitary(n) => {
            let q = ginibre_q(*n, rng);
            let det = q.det();
            q.scale(C64::from_polar(1.0, -det.arg() / *n as f64))
        }
        _ => unreachable!("blocks are simple"),
    }
}

/// Q factor of a standard complex Gaussian matrix with non-negative `R`
/// diagonal: exactly Haar on `U(n)`.
fn ginibre_q<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let scale = core::f64::consts::FRAC_1_SQRT_2;
    let data = (0..n * n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            c64(re * scale, im * scale)
        })
        .collect();
    linalg::gram_schmidt_q(&CMatrix::from_row_major(n, data).unwrap())
}

fn log_simple(d: &GroupDescriptor, g: &CMatrix, shift: f64) -> Result<CMatrix, GroupError> {
    let n = g.dim();
    if matches!(d, GroupDescriptor::Torus(_)) {
        let mut diag = Vec::with_capacity(n);
        for z in g.diagonal() {
            diag.push(c64(0.0, branch_phase(z, shift)?));
        }
        return Ok(CMatrix::from_diagonal(&diag));
    }
    let eig = linalg::unitary_eigen(g);
    let mut phases = Vec::with_capacity(n);
    for z in &eig.values {
        phases.push(branch_phase(*z, shift)?);
    }
    if matches!(d, GroupDescriptor::SpecialUnitary(_)) {
        let total: f64 = phases.iter().sum();
        let turns = (total / (2.0 * PI)).round() as i64;
        if turns != 0 {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| phases[b].partial_cmp(&phases[a]).unwrap_or(Ordering::Equal));
            if turns > 0 {
                for &i in order.iter().take(turns as usize) {
                    phases[i] -= 2.0 * PI;
                }
            } else {
                for &i in order.iter().rev().take((-turns) as usize) {
                    phases[i] += 2.0 * PI;
                }
            }
        }
    }
    let d: Vec<C64> = phases.iter().map(|t| c64(0.0, *t)).collect();
    let x = linalg::reconstruct(&eig.vectors, &d).skew_hermitian_part();
    Ok(x)
}

fn branch_phase(z: C64, shift: f64) -> Result<f64, GroupError> {
    let rotated = z * C64::from_polar(1.0, -shift);
    let distance = (rotated + c64(1.0, 0.0)).norm();
    if distance < BRANCH_TOLERANCE {
        return Err(GroupError::BranchCut { distance });
    }
    Ok(rotated.arg() + shift)
}

/// An element of a compact matrix group.
#[derive(Clone, Debug)]
pub struct GroupElement {
    group: Group,
    matrix: CMatrix,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.matrix == other.matrix
    }
}

impl GroupElement {
    fn new_unchecked(group: Group, matrix: CMatrix) -> Self {
        GroupElement { group, matrix }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    fn check_same(&self, other: &GroupElement) -> Result<(), GroupError> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(GroupError::DescriptorMismatch)
        }
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_same(other)?;
        Ok(self.group.from_trusted(&self.matrix * &other.matrix))
    }

    pub fn inv(&self) -> GroupElement {
        self.group.from_trusted(self.matrix.adjoint())
    }

    /// `a^{-1} h a` with `self = h`.
    pub fn conjugate(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_same(a)?;
        let m = &(&a.matrix.adjoint() * &self.matrix) * &a.matrix;
        Ok(self.group.from_trusted(m))
    }

    /// `Tr(U) / n`.
    pub fn trace_normalized(&self) -> C64 {
        self.matrix.trace() / self.matrix.dim() as f64
    }

    /// Distance `‖U − V‖_F`; for quotients the minimum over the coset of
    /// `other`, so near-ties in the canonical choice do not matter.
    pub fn distance(&self, other: &GroupElement) -> f64 {
        match self.group.kernel() {
            Some(kernel) => kernel
                .iter()
                .map(|k| self.matrix.distance(&(&other.matrix * k)))
                .fold(f64::INFINITY, f64::min),
            None => self.matrix.distance(&other.matrix),
        }
    }

    /// Principal logarithm. Fails when an eigenvalue sits on the branch cut.
    pub fn log_map(&self) -> Result<LieAlgebraElement, GroupError> {
        self.log_map_shifted(0.0)
    }

    /// Logarithm with the branch cut rotated by `shift`.
    pub fn log_map_shifted(&self, shift: f64) -> Result<LieAlgebraElement, GroupError> {
        let x = self.group.log_matrix(&self.matrix, shift)?;
        let matrix = self.group.project_algebra(&x);
        Ok(LieAlgebraElement { group: self.group.clone(), matrix })
    }

    /// Polar re-unitarization; a no-op (up to rounding) on clean members.
    pub fn reunitarized(&self) -> GroupElement {
        GroupElement::new_unchecked(self.group.clone(), self.group.canonical(self.group.reunitarize(&self.matrix)))
    }
}

/// Element of the Lie algebra of a [`Group`]: a skew-Hermitian matrix
/// satisfying the group's block constraints.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraElement {
    group: Group,
    matrix: CMatrix,
}

impl LieAlgebraElement {
    pub fn zero(group: &Group) -> Self {
        LieAlgebraElement { group: group.clone(), matrix: CMatrix::zeros(group.dim()) }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn scale(&self, s: f64) -> LieAlgebraElement {
        LieAlgebraElement { group: self.group.clone(), matrix: self.matrix.scale_real(s) }
    }

    pub fn exp_map(&self) -> GroupElement {
        GroupElement::new_unchecked(self.group.clone(), self.group.exp_matrix(&self.matrix))
    }
}

/// Canonical representative of `g K` in the quotient `group`.
pub fn quotient_project(group: &Group, g: &GroupElement) -> Result<GroupElement, GroupError> {
    if group.kernel().is_none() {
        return Err(GroupError::InvalidDescriptor("projection target is not a quotient"));
    }
    if *g.group() != group.base() {
        return Err(GroupError::NotMember("element is not in the quotient's base group"));
    }
    Ok(GroupElement::new_unchecked(group.clone(), group.canonical(g.matrix().clone())))
}
