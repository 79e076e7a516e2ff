use alloc::vec::Vec;

use super::{Bump, ConnectionError, SmoothConnection};
use crate::groups::{Group, GroupElement, GroupError, LieAlgebraElement};
use crate::linalg::{self, CMatrix};
use crate::pathgroupoid::{Graph, PathWord, Point};

/// Smooth gauge transformation `g(x) = a · exp(Σ_j Y_j φ_j(x))` with a
/// constant left factor `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothGauge {
    group: Group,
    constant: CMatrix,
    terms: Vec<(LieAlgebraElement, Bump)>,
}

impl SmoothGauge {
    pub fn identity(group: Group) -> Self {
        let constant = CMatrix::identity(group.dim());
        SmoothGauge { group, constant, terms: Vec::new() }
    }

    pub fn constant(a: &GroupElement) -> Self {
        SmoothGauge { group: a.group().clone(), constant: a.matrix().clone(), terms: Vec::new() }
    }

    pub fn new(constant: &GroupElement, terms: Vec<(LieAlgebraElement, Bump)>) -> Result<Self, ConnectionError> {
        let group = constant.group().clone();
        if terms.iter().any(|(y, _)| *y.group() != group) {
            return Err(GroupError::DescriptorMismatch.into());
        }
        Ok(SmoothGauge { group, constant: constant.matrix().clone(), terms })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Representative matrix of `g(x)` in the base group.
    pub fn value_at(&self, x: &[f64]) -> CMatrix {
        let mut y = CMatrix::zeros(self.group.dim());
        for (t, bump) in &self.terms {
            let w = bump.value_at(x);
            if w != 0.0 {
                y = &y + &t.matrix().scale_real(w);
            }
        }
        if y.max_abs() == 0.0 {
            return self.constant.clone();
        }
        &self.constant * &linalg::exp_skew_hermitian(&y)
    }
}

/// Holonomies of `A.g`, evaluated through the covariance identity
/// `H_{A.g}(γ) = g(γ(1))⁻¹ H_A(γ) g(γ(0))`. This identity is the defining
/// contract: `g` is never differentiated.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugedConnection {
    connection: SmoothConnection,
    gauge: SmoothGauge,
}

pub fn gauge_act_smooth(a: &SmoothConnection, g: &SmoothGauge) -> Result<GaugedConnection, ConnectionError> {
    if *a.group() != g.group {
        return Err(GroupError::DescriptorMismatch.into());
    }
    Ok(GaugedConnection { connection: a.clone(), gauge: g.clone() })
}

impl GaugedConnection {
    pub fn connection(&self) -> &SmoothConnection {
        &self.connection
    }

    pub fn gauge(&self) -> &SmoothGauge {
        &self.gauge
    }

    /// Transport matrix of `A.g` along a sampled curve.
    pub fn transport(&self, curve: &[Point], steps: usize) -> Result<CMatrix, ConnectionError> {
        let u = self.connection.transport(curve, steps)?;
        match (curve.first(), curve.last()) {
            (Some(start), Some(end)) => Ok(&(&self.gauge.value_at(end).adjoint() * &u) * &self.gauge.value_at(start)),
            _ => Ok(u),
        }
    }

    pub fn holonomy(&self, graph: &Graph, p: &PathWord, steps: usize) -> Result<GroupElement, ConnectionError> {
        let u = self.connection.holonomy_letters_matrix(graph, p.letters(), steps)?;
        graph.check_path(p)?;
        let curves = graph.path_curves(p)?;
        let group = self.connection.group();
        let (Some(first), Some(last)) = (curves.first(), curves.last()) else {
            return Ok(group.identity());
        };
        let start = &first[0];
        let end = last.last().expect("edge curves have at least two samples");
        let m = &(&self.gauge.value_at(end).adjoint() * &u) * &self.gauge.value_at(start);
        Ok(group.from_trusted(m))
    }
}
