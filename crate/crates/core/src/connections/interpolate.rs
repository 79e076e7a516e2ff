use alloc::sync::Arc;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::smooth::segment_distance;
use super::{Bump, BumpTerm, ConnectionError, SmoothConnection};
use crate::groups::{Group, GroupElement, GroupError};
use crate::pathgroupoid::{Graph, PathWord, Point};

/// Branch-cut rotations tried, in order, when a target's logarithm is
/// ambiguous.
const BRANCH_SHIFTS: [f64; 6] = [0.0, 0.5, -0.5, 1.0, -1.0, 1.5];

/// A bump never reaches further than this fraction of its interval, so its
/// support stays inside the interval.
const RADIUS_FRACTION: f64 = 0.45;
/// Clearance kept between a bump and every other interval of the family.
const CLEARANCE: f64 = 0.9;

/// Interval `interval` of the curve traversed by letter `letter` (both
/// zero-based, in traversal order).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrivateSegment {
    pub letter: usize,
    pub interval: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMember {
    pub path: PathWord,
    pub private: PrivateSegment,
}

/// Paths each owning a private interval that no other member comes close
/// to. This is the independence witness used to place bumps.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependentFamily {
    graph: Arc<Graph>,
    members: Vec<FamilyMember>,
    bumps: Vec<PlacedBump>,
}

/// Where the bump of one member sits, and its line integral along the
/// member.
#[derive(Debug, Clone, PartialEq)]
struct PlacedBump {
    center: Point,
    radius: f64,
    direction: Vec<f64>,
    integral: f64,
}

fn oriented_intervals(graph: &Graph, p: &PathWord) -> Result<Vec<Vec<(Point, Point)>>, ConnectionError> {
    Ok(graph
        .path_curves(p)?
        .into_iter()
        .map(|c| c.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect())
        .collect())
}

impl IndependentFamily {
    pub fn new(graph: Arc<Graph>, members: Vec<FamilyMember>) -> Result<Self, ConnectionError> {
        let mut intervals = Vec::with_capacity(members.len());
        for m in &members {
            graph.check_path(&m.path)?;
            intervals.push(oriented_intervals(&graph, &m.path)?);
        }
        let mut bumps = Vec::with_capacity(members.len());
        for (k, m) in members.iter().enumerate() {
            let violation = |reason| ConnectionError::Independence { member: k, reason };
            let letters = m.path.letters();
            let letter = *letters.get(m.private.letter).ok_or(violation("private letter out of range"))?;
            let (a, b) = intervals[k][m.private.letter]
                .get(m.private.interval)
                .cloned()
                .ok_or(violation("private interval out of range"))?;
            if letters.iter().filter(|l| l.edge == letter.edge).count() > 1 {
                return Err(violation("the private edge is traversed more than once"));
            }
            for (j, other) in members.iter().enumerate() {
                if j != k && other.path.letters().iter().any(|l| l.edge == letter.edge) {
                    return Err(violation("another member traverses the private edge"));
                }
            }
            let delta: Vec<f64> = a.iter().zip(&b).map(|(x, y)| y - x).collect();
            let length = delta.iter().map(|d| d * d).sum::<f64>().sqrt();
            if length == 0.0 {
                return Err(violation("the private interval is degenerate"));
            }
            let center: Point = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
            let mut radius = RADIUS_FRACTION * length;
            for (j, ivs) in intervals.iter().enumerate() {
                for (li, letter_ivs) in ivs.iter().enumerate() {
                    for (ii, (p, q)) in letter_ivs.iter().enumerate() {
                        if j == k && li == m.private.letter && ii == m.private.interval {
                            continue;
                        }
                        radius = radius.min(CLEARANCE * segment_distance(&center, p, q));
                    }
                }
            }
            if radius < 1e-6 * length {
                return Err(violation("the private interval is crowded by other paths"));
            }
            let direction = delta.iter().map(|d| d / length).collect();
            bumps.push(PlacedBump { center, radius, direction, integral: 1.5 * radius });
        }
        Ok(IndependentFamily { graph, members, bumps })
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn members(&self) -> &[FamilyMember] {
        &self.members
    }

    pub fn paths(&self) -> Vec<PathWord> {
        self.members.iter().map(|m| m.path.clone()).collect()
    }

    /// Radius of the bump placed for member `k`.
    pub fn bump_radius(&self, k: usize) -> Option<f64> {
        self.bumps.get(k).map(|b| b.radius)
    }
}

/// Smooth connection whose holonomy along member `k` is `targets[k]`.
///
/// Each non-identity target gets one bump on its private interval with
/// `X_k = −log(g_k)/c_k`, `c_k` the bump's line integral. Along a straight
/// interval through the centre the form is a scalar multiple of `X_k`, so
/// transport there is `exp(−c_k X_k) = g_k` up to quadrature error, and the
/// other members never enter the support.
pub fn interpolate_connection(group: &Group, family: &IndependentFamily, targets: &[GroupElement]) -> Result<SmoothConnection, ConnectionError> {
    if targets.len() != family.members.len() {
        return Err(ConnectionError::TargetCount { expected: family.members.len(), found: targets.len() });
    }
    let identity = group.identity();
    let mut terms = Vec::new();
    for (k, (g, bump)) in targets.iter().zip(&family.bumps).enumerate() {
        if g.group() != group {
            return Err(GroupError::DescriptorMismatch.into());
        }
        if g.distance(&identity) < 1e-14 {
            continue;
        }
        let log = BRANCH_SHIFTS
            .iter()
            .find_map(|s| g.log_map_shifted(*s).ok())
            .ok_or(ConnectionError::BranchFailure { member: k, attempts: BRANCH_SHIFTS.len() })?;
        let x = log.scale(-1.0 / bump.integral);
        let b = Bump::new(bump.center.clone(), bump.radius)?;
        terms.push(BumpTerm::new(x, b, bump.direction.clone())?);
    }
    SmoothConnection::new(group.clone(), terms)
}
