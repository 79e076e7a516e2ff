use alloc::sync::Arc;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{ConnectionError, GeneralizedConnection};
use crate::groups::{Group, GroupDescriptor, GroupElement, GroupError, LieAlgebraElement};
use crate::linalg::{self, CMatrix, C64};
use crate::pathgroupoid::{Graph, Letter, Orientation, PathWord, Point};

/// Magnus steps per curve interval used when callers have no preference.
pub const DEFAULT_STEPS: usize = 64;

const ADAPTIVE_MAX_STEPS: usize = 1 << 14;

/// Minimum Magnus steps per bump radius. The profile's transition zone is
/// half a radius wide and has steep higher derivatives; below roughly this
/// resolution the quadrature error of a crossing climbs above `1e-9`.
const STEPS_PER_RADIUS: f64 = 96.0;

fn transition(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// Smooth radial profile: `1` for `ρ ≤ r/2`, `0` for `ρ ≥ r`, and the
/// `C^∞` gluing `f(1−s)/(f(1−s)+f(s))`, `f(t) = e^{−1/t}`, in between.
/// The gluing is antisymmetric about its midpoint, so the integral of the
/// profile along a diameter is exactly `1.5 r`.
pub fn bump_profile(rho: f64, radius: f64) -> f64 {
    if rho <= 0.5 * radius {
        return 1.0;
    }
    if rho >= radius {
        return 0.0;
    }
    let s = 2.0 * rho / radius - 1.0;
    let a = transition(1.0 - s);
    let b = transition(s);
    a / (a + b)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn sub(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Distance from `c` to the segment `[a, b]`.
pub(crate) fn segment_distance(c: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let d = sub(b, a);
    let dd = dot(&d, &d);
    let t = if dd == 0.0 { 0.0 } else { (dot(&sub(c, a), &d) / dd).clamp(0.0, 1.0) };
    let p: Point = a.iter().zip(&d).map(|(x, y)| x + t * y).collect();
    norm(&sub(c, &p))
}

/// Radial bump centred in the chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Bump {
    center: Point,
    radius: f64,
}

impl Bump {
    pub fn new(center: Point, radius: f64) -> Result<Self, ConnectionError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(ConnectionError::BadBump("radius must be positive and finite"));
        }
        if center.is_empty() || center.iter().any(|x| !x.is_finite()) {
            return Err(ConnectionError::BadBump("center must be a finite chart point"));
        }
        Ok(Bump { center, radius })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn value_at(&self, x: &[f64]) -> f64 {
        bump_profile(norm(&sub(x, &self.center)), self.radius)
    }

    /// Whether the open support meets the segment `[a, b]`.
    pub fn touches(&self, a: &[f64], b: &[f64]) -> bool {
        segment_distance(&self.center, a, b) < self.radius
    }
}

/// One term `X φ(x) ⟨direction, dx⟩` of a smooth connection.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpTerm {
    x: LieAlgebraElement,
    bump: Bump,
    direction: Vec<f64>,
}

impl BumpTerm {
    /// `direction` is normalized here.
    pub fn new(x: LieAlgebraElement, bump: Bump, direction: Vec<f64>) -> Result<Self, ConnectionError> {
        if direction.len() != bump.center.len() {
            return Err(ConnectionError::ChartDimension { expected: bump.center.len(), found: direction.len() });
        }
        let n = norm(&direction);
        if !(n.is_finite() && n > 0.0) {
            return Err(ConnectionError::BadBump("direction must be a nonzero finite covector"));
        }
        let direction = direction.iter().map(|d| d / n).collect();
        Ok(BumpTerm { x, bump, direction })
    }

    pub fn x(&self) -> &LieAlgebraElement {
        &self.x
    }

    pub fn bump(&self) -> &Bump {
        &self.bump
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }
}

/// `A = Σ_k X_k φ_k(x) ⟨dir_k, dx⟩`, a `𝔤`-valued 1-form on the chart.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothConnection {
    group: Group,
    terms: Vec<BumpTerm>,
}

/// Block layout used to exponentiate per factor.
#[derive(Clone, Copy)]
struct Block {
    offset: usize,
    dim: usize,
    diagonal: bool,
}

fn layout(group: &Group) -> Vec<Block> {
    group
        .descriptor()
        .blocks()
        .iter()
        .map(|(offset, d)| Block { offset: *offset, dim: d.dim(), diagonal: matches!(d, GroupDescriptor::Torus(_)) })
        .collect()
}

fn exp_blocks(blocks: &[Block], omega: &CMatrix) -> CMatrix {
    let n = omega.dim();
    let mut out = CMatrix::zeros(n);
    for b in blocks {
        if b.diagonal {
            for i in 0..b.dim {
                let k = b.offset + i;
                out[(k, k)] = C64::from_polar(1.0, omega[(k, k)].im);
            }
        } else {
            let e = linalg::exp_skew_hermitian(&omega.block(b.offset, b.dim));
            for i in 0..b.dim {
                for j in 0..b.dim {
                    out[(b.offset + i, b.offset + j)] = e[(i, j)];
                }
            }
        }
    }
    out
}

impl SmoothConnection {
    pub fn new(group: Group, terms: Vec<BumpTerm>) -> Result<Self, ConnectionError> {
        let mut dim: Option<usize> = None;
        for t in &terms {
            if *t.x.group() != group {
                return Err(GroupError::DescriptorMismatch.into());
            }
            let d = t.bump.center.len();
            match dim {
                Some(expected) if expected != d => return Err(ConnectionError::ChartDimension { expected, found: d }),
                _ => dim = Some(d),
            }
        }
        Ok(SmoothConnection { group, terms })
    }

    pub fn empty(group: Group) -> Self {
        SmoothConnection { group, terms: Vec::new() }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn terms(&self) -> &[BumpTerm] {
        &self.terms
    }

    pub fn chart_dim(&self) -> Option<usize> {
        self.terms.first().map(|t| t.bump.center.len())
    }

    fn check_point(&self, x: &[f64]) -> Result<(), ConnectionError> {
        match self.chart_dim() {
            Some(expected) if expected != x.len() => Err(ConnectionError::ChartDimension { expected, found: x.len() }),
            _ => Ok(()),
        }
    }

    /// `A(x)[v]`.
    pub fn form_at(&self, x: &[f64], v: &[f64]) -> CMatrix {
        self.form_with(self.terms.iter(), x, v)
    }

    fn form_with<'a>(&self, terms: impl Iterator<Item = &'a BumpTerm>, x: &[f64], v: &[f64]) -> CMatrix {
        let mut out = CMatrix::zeros(self.group.dim());
        for t in terms {
            let w = t.bump.value_at(x) * dot(&t.direction, v);
            if w != 0.0 {
                out = &out + &t.x.matrix().scale_real(w);
            }
        }
        out
    }

    /// Transport across the straight interval `[a, b]` with at least `steps`
    /// fourth order Magnus steps at the two Gauss points, refined so that
    /// every active bump is resolved. The scheme is
    /// time-symmetric, so retracing an interval cancels to rounding.
    fn transport_interval(&self, blocks: &[Block], a: &[f64], b: &[f64], steps: usize) -> Option<CMatrix> {
        let delta = sub(b, a);
        if norm(&delta) == 0.0 {
            return None;
        }
        let active: Vec<&BumpTerm> = self.terms.iter().filter(|t| t.bump.touches(a, b)).collect();
        if active.is_empty() {
            return None;
        }
        let length = norm(&delta);
        let finest = active.iter().map(|t| t.bump.radius).fold(f64::INFINITY, f64::min);
        let steps = steps.max((STEPS_PER_RADIUS * length / finest).ceil() as usize);
        let h = 1.0 / steps as f64;
        let offset = 3.0.sqrt() / 6.0;
        let comm = 3.0.sqrt() * h * h / 12.0;
        let at = |s: f64| -> Point { a.iter().zip(&delta).map(|(x, d)| x + s * d).collect() };
        let mut u = CMatrix::identity(self.group.dim());
        for j in 0..steps {
            let mid = (j as f64 + 0.5) * h;
            let m1 = -&self.form_with(active.iter().copied(), &at(mid - offset * h), &delta);
            let m2 = -&self.form_with(active.iter().copied(), &at(mid + offset * h), &delta);
            if m1.max_abs() == 0.0 && m2.max_abs() == 0.0 {
                continue;
            }
            let omega = &(&m1 + &m2).scale_real(0.5 * h) + &m2.commutator(&m1).scale_real(comm);
            u = &exp_blocks(blocks, &omega) * &u;
        }
        Some(u)
    }

    /// Transport along a sampled polyline, `steps` Magnus steps per interval.
    pub fn transport(&self, curve: &[Point], steps: usize) -> Result<CMatrix, ConnectionError> {
        if steps == 0 {
            return Err(ConnectionError::ZeroSteps);
        }
        let blocks = layout(&self.group);
        let mut u = CMatrix::identity(self.group.dim());
        for p in curve {
            self.check_point(p)?;
        }
        for w in curve.windows(2) {
            if let Some(t) = self.transport_interval(&blocks, &w[0], &w[1], steps) {
                u = &t * &u;
            }
        }
        Ok(u)
    }

    /// Transport with per-interval step doubling until successive results
    /// differ by at most `tolerance`. Returns the transport and the largest
    /// step count used on any interval.
    pub fn transport_adaptive(&self, curve: &[Point], tolerance: f64) -> Result<(CMatrix, usize), ConnectionError> {
        let blocks = layout(&self.group);
        let mut u = CMatrix::identity(self.group.dim());
        let mut used = 0;
        for p in curve {
            self.check_point(p)?;
        }
        for w in curve.windows(2) {
            let mut steps = 2;
            let Some(mut coarse) = self.transport_interval(&blocks, &w[0], &w[1], steps) else { continue };
            loop {
                steps *= 2;
                let fine = self.transport_interval(&blocks, &w[0], &w[1], steps).expect("active interval");
                let converged = fine.distance(&coarse) <= tolerance;
                coarse = fine;
                if converged || steps >= ADAPTIVE_MAX_STEPS {
                    break;
                }
            }
            used = used.max(steps);
            u = &coarse * &u;
        }
        Ok((u, used))
    }

    /// Raw transport along a letter sequence, without reducing it first.
    pub fn holonomy_letters_matrix(&self, graph: &Graph, letters: &[Letter], steps: usize) -> Result<CMatrix, ConnectionError> {
        let mut u = CMatrix::identity(self.group.dim());
        for &l in letters {
            let mut c = graph.edge_curve(l.edge).ok_or(crate::pathgroupoid::PathError::NoGeometry(l.edge))?;
            if l.orientation == Orientation::Backward {
                c.reverse();
            }
            u = &self.transport(&c, steps)? * &u;
        }
        Ok(u)
    }

    /// `H_A(p)`.
    pub fn holonomy(&self, graph: &Graph, p: &PathWord, steps: usize) -> Result<GroupElement, ConnectionError> {
        graph.check_path(p)?;
        Ok(self.group.from_trusted(self.holonomy_letters_matrix(graph, p.letters(), steps)?))
    }

    /// Like [`holonomy`](Self::holonomy) but with adaptive step control.
    pub fn holonomy_adaptive(&self, graph: &Graph, p: &PathWord, tolerance: f64) -> Result<GroupElement, ConnectionError> {
        graph.check_path(p)?;
        let mut u = CMatrix::identity(self.group.dim());
        for c in graph.path_curves(p)? {
            u = &self.transport_adaptive(&c, tolerance)?.0 * &u;
        }
        Ok(self.group.from_trusted(u))
    }

    /// The generalized connection `e ↦ H_A(e)` induced on a graph.
    pub fn edge_holonomies(&self, graph: Arc<Graph>, steps: usize) -> Result<GeneralizedConnection, ConnectionError> {
        let mut values = alloc::collections::BTreeMap::new();
        for e in graph.edge_ids() {
            let m = self.holonomy_letters_matrix(&graph, &[Letter { edge: e, orientation: Orientation::Forward }], steps)?;
            values.insert(e, self.group.from_trusted(m));
        }
        GeneralizedConnection::new(graph, self.group.clone(), values)
    }
}

