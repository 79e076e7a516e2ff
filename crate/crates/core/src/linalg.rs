//! Small dense complex matrices.
//!
//! Everything in this crate lives inside some `U(n)` with `n` in the single
//! digits, so the kernel favours plain row-major storage and direct loops over
//! blocked algorithms. Spectral work goes through a cyclic complex Jacobi
//! solver, which is accurate to a few ulps on Hermitian input and keeps
//! block-diagonal structure intact.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

// Float supplies libm-backed math in no_std builds; with std linked the
// inherent methods win and the import looks unused.
#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex;

/// Complex scalar used throughout the crate.
pub type C64 = Complex<f64>;

/// Quantization step used when two entries are considered equal in
/// lexicographic comparisons.
pub const LEX_TOLERANCE: f64 = 1e-9;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Square complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{}) [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for j in 0..self.n {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![C64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from `n * n` row-major entries.
    pub fn from_row_major(n: usize, data: Vec<C64>) -> Option<Self> {
        if data.len() != n * n {
            return None;
        }
        Some(CMatrix { n, data })
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = *d;
        }
        m
    }

    /// Block-diagonal matrix with the given blocks along the diagonal.
    pub fn block_diagonal(blocks: &[CMatrix]) -> Self {
        let n = blocks.iter().map(|b| b.n).sum();
        let mut m = Self::zeros(n);
        let mut offset = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    m[(offset + i, offset + j)] = b[(i, j)];
                }
            }
            offset += b.n;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    /// Square sub-block starting at `(offset, offset)`.
    pub fn block(&self, offset: usize, size: usize) -> CMatrix {
        let mut b = CMatrix::zeros(size);
        for i in 0..size {
            for j in 0..size {
                b[(i, j)] = self[(offset + i, offset + j)];
            }
        }
        b
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j];
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix { n: self.n, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> CMatrix {
        CMatrix { n: self.n, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.n).map(|i| self.data[i * self.n + i]).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖self − other‖_F`.
    pub fn distance(&self, other: &CMatrix) -> f64 {
        debug_assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius norm of the off-diagonal part.
    pub fn off_diagonal_norm(&self) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += self.data[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    /// `‖U†U − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        (&self.adjoint() * self).distance(&CMatrix::identity(self.n))
    }

    /// `‖X† + X‖_F`.
    pub fn skew_hermitian_defect(&self) -> f64 {
        let adj = self.adjoint();
        self.data.iter().zip(&adj.data).map(|(a, b)| (a + b).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.off_diagonal_norm() <= tol
    }

    /// `(X − X†) / 2`.
    pub fn skew_hermitian_part(&self) -> CMatrix {
        let adj = self.adjoint();
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&adj.data).map(|(a, b)| (a - b) * 0.5).collect(),
        }
    }

    /// `(X + X†) / 2`.
    pub fn hermitian_part(&self) -> CMatrix {
        let adj = self.adjoint();
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&adj.data).map(|(a, b)| (a + b) * 0.5).collect(),
        }
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &CMatrix) -> CMatrix {
        &(self * other) - &(other * self)
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> C64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = C64::new(1.0, 0.0);
        for col in 0..n {
            let mut piv = col;
            let mut best = a[col * n + col].norm();
            for row in col + 1..n {
                let v = a[row * n + col].norm();
                if v > best {
                    best = v;
                    piv = row;
                }
            }
            if best == 0.0 {
                return C64::new(0.0, 0.0);
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for row in col + 1..n {
                let factor = a[row * n + col] / p;
                if factor.norm_sqr() == 0.0 {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    a[row * n + j] -= factor * v;
                }
            }
        }
        det
    }

    /// Lexicographic comparison over row-major entries, real part before
    /// imaginary part, treating differences below `tol` as ties.
    pub fn lex_cmp(&self, other: &CMatrix, tol: f64) -> core::cmp::Ordering {
        use core::cmp::Ordering;
        for (a, b) in self.data.iter().zip(&other.data) {
            for (x, y) in [(a.re, b.re), (a.im, b.im)] {
                if (x - y).abs() > tol {
                    return if x < y { Ordering::Less } else { Ordering::Greater };
                }
            }
        }
        Ordering::Equal
    }

    /// Row-major vectorization.
    pub fn to_vec(&self) -> Vec<C64> {
        self.data.clone()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        let n = self.n;
        debug_assert_eq!(n, rhs.n);
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix { n: self.n, data: self.data.iter().map(|a| -a).collect() }
    }
}

/// Eigen-decomposition of a Hermitian matrix: `A = V diag(λ) V†` with
/// eigenvalues in ascending order.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Cyclic complex Jacobi. The input is symmetrized before iterating.
pub fn hermitian_eigen(a: &CMatrix) -> HermitianEigen {
    let n = a.dim();
    let mut m = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..64 {
        if m.off_diagonal_norm() <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 || mag <= 1e-18 * scale {
                    m[(p, q)] = C64::new(0.0, 0.0);
                    m[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                let phase = apq / mag;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J = diag(1, conj(phase)) · [[c, s], [-s, c]] on the (p, q) plane.
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0);
                let jqp = phase.conj() * (-s);
                let jqq = phase.conj() * c;
                // m ← m · J (columns p, q)
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * jpp + mkq * jqp;
                    m[(k, q)] = mkp * jpq + mkq * jqq;
                }
                // m ← J† · m (rows p, q)
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = jpp.conj() * mpk + jqp.conj() * mqk;
                    m[(q, k)] = jpq.conj() * mpk + jqq.conj() * mqk;
                }
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
                m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap_or(core::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, new)] = v[(k, old)];
        }
    }
    HermitianEigen { values, vectors }
}

/// Spectral decomposition `U = V diag(λ) V†` of a (numerically) unitary
/// matrix, with `V` unitary.
#[derive(Clone, Debug)]
pub struct UnitaryEigen {
    pub values: Vec<C64>,
    pub vectors: CMatrix,
}

impl UnitaryEigen {
    /// Eigenphases in `(−π, π]`, in the same order as `values`.
    pub fn phases(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.arg()).collect()
    }
}

/// Diagonalizes a normal matrix through Hermitian combinations
/// `Re U + γ Im U`, cycling `γ` until the residual off-diagonal part vanishes.
/// Different `γ` have stationary points at different eigenphases, so
/// clusters that one combination cannot separate are split by the next.
pub fn unitary_eigen(u: &CMatrix) -> UnitaryEigen {
    let n = u.dim();
    let mut vectors = CMatrix::identity(n);
    let mut d = u.clone();
    const GAMMAS: [f64; 6] = [0.577_215_664_9, -1.381_966_011_3, 2.645_751_311_1, 0.302_775_637_7, -0.723_606_797_7, 1.732_050_807_6];
    for (round, gamma) in GAMMAS.iter().cycle().take(24).enumerate() {
        if round > 0 && d.off_diagonal_norm() <= 1e-14 * (n as f64) {
            break;
        }
        let adj = d.adjoint();
        let re = (&d + &adj).scale_real(0.5);
        let im = (&d - &adj).scale(C64::new(0.0, -0.5));
        let k = &re + &im.scale_real(*gamma);
        let eig = hermitian_eigen(&k);
        d = &(&eig.vectors.adjoint() * &d) * &eig.vectors;
        vectors = &vectors * &eig.vectors;
    }
    UnitaryEigen { values: d.diagonal(), vectors }
}

/// `exp(X)` for skew-Hermitian `X`, via the spectral decomposition of the
/// Hermitian matrix `−iX`. The result is unitary to rounding.
pub fn exp_skew_hermitian(x: &CMatrix) -> CMatrix {
    let n = x.dim();
    if x.max_abs() == 0.0 {
        return CMatrix::identity(n);
    }
    if x.is_diagonal(0.0) {
        let diag: Vec<C64> = x.diagonal().iter().map(|z| C64::new(0.0, z.im).exp()).collect();
        return CMatrix::from_diagonal(&diag);
    }
    let k = x.scale(C64::new(0.0, -1.0));
    let eig = hermitian_eigen(&k);
    let phases: Vec<C64> = eig.values.iter().map(|t| C64::new(0.0, *t).exp()).collect();
    reconstruct(&eig.vectors, &phases)
}

/// `V diag(d) V†`.
pub fn reconstruct(v: &CMatrix, d: &[C64]) -> CMatrix {
    let n = v.dim();
    let mut scaled = v.clone();
    for i in 0..n {
        for j in 0..n {
            scaled[(i, j)] *= d[j];
        }
    }
    &scaled * &v.adjoint()
}

/// Unitary polar factor `M (M†M)^{-1/2}`. Idempotent on unitary input up to
/// rounding.
pub fn polar_unitary(m: &CMatrix) -> CMatrix {
    let p = &m.adjoint() * m;
    let eig = hermitian_eigen(&p);
    let inv_sqrt: Vec<C64> = eig
        .values
        .iter()
        .map(|&l| C64::new(if l > 0.0 { 1.0 / l.sqrt() } else { 0.0 }, 0.0))
        .collect();
    m * &reconstruct(&eig.vectors, &inv_sqrt)
}

/// Thin QR of a square matrix by twice-iterated modified Gram–Schmidt.
/// The diagonal of `R` is real and non-negative, so `Q` is the phase-corrected
/// factor used for Haar sampling.
pub fn gram_schmidt_q(a: &CMatrix) -> CMatrix {
    let n = a.dim();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..n).map(|i| a[(i, j)]).collect()).collect();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: C64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                let (done, rest) = cols.split_at_mut(j);
                for (z, q) in rest[0].iter_mut().zip(&done[k]) {
                    *z -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    let mut q = CMatrix::zeros(n);
    for j in 0..n {
        for i in 0..n {
            q[(i, j)] = cols[j][i];
        }
    }
    q
}
