use alloc::vec::Vec;

use super::SpectraError;
use crate::connections::{interpolate_connection, IndependentFamily, SmoothConnection};
use crate::groups::{Group, GroupElement};

/// Outcome of realizing prescribed holonomies on an independent family.
#[derive(Debug, Clone)]
pub struct ApproximationReport {
    pub connection: SmoothConnection,
    /// `‖H_A(γ_k) − g_k‖_F` per family member.
    pub errors: Vec<f64>,
    pub max_error: f64,
    pub tolerance: f64,
    pub met: bool,
}

/// Builds a smooth connection whose holonomies on `family` approximate
/// `targets`, then measures the achieved errors with `steps` integration
/// steps per curve.
pub fn approximation_experiment(
    group: &Group,
    family: &IndependentFamily,
    targets: &[GroupElement],
    tolerance: f64,
    steps: usize,
) -> Result<ApproximationReport, SpectraError> {
    let connection = interpolate_connection(group, family, targets)?;
    let graph = family.graph();
    let errors = family
        .paths()
        .iter()
        .zip(targets)
        .map(|(p, g)| Ok(connection.holonomy(graph, p, steps)?.distance(g)))
        .collect::<Result<Vec<f64>, SpectraError>>()?;
    let max_error = errors.iter().copied().fold(0.0, f64::max);
    Ok(ApproximationReport { connection, errors, max_error, tolerance, met: max_error <= tolerance })
}
