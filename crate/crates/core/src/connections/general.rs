use alloc::collections::BTreeMap;
use alloc::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ConnectionError;
use crate::groups::{quotient_project, Group, GroupElement, GroupError};
use crate::linalg::CMatrix;
use crate::pathgroupoid::{EdgeId, Graph, Letter, Orientation, PathWord, VertexId};

/// A homomorphism from the path groupoid of a graph into `G`, given by its
/// values on edges.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedConnection {
    graph: Arc<Graph>,
    group: Group,
    values: BTreeMap<EdgeId, GroupElement>,
}

impl GeneralizedConnection {
    /// Requires exactly one value per edge, each in `group`.
    pub fn new(graph: Arc<Graph>, group: Group, values: BTreeMap<EdgeId, GroupElement>) -> Result<Self, ConnectionError> {
        for e in graph.edge_ids() {
            let v = values.get(&e).ok_or(ConnectionError::MissingEdge(e))?;
            if *v.group() != group {
                return Err(GroupError::DescriptorMismatch.into());
            }
        }
        if let Some(extra) = values.keys().find(|e| graph.edge(**e).is_none()) {
            return Err(ConnectionError::UnknownEdge(*extra));
        }
        Ok(GeneralizedConnection { graph, group, values })
    }

    pub fn identity(graph: Arc<Graph>, group: Group) -> Self {
        let values = graph.edge_ids().map(|e| (e, group.identity())).collect();
        GeneralizedConnection { graph, group, values }
    }

    /// Independent Haar values on every edge, one seeded stream for the
    /// whole connection.
    pub fn random(graph: Arc<Graph>, group: Group, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = graph.edge_ids().map(|e| (e, group.sample(&mut rng))).collect();
        GeneralizedConnection { graph, group, values }
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn values(&self) -> &BTreeMap<EdgeId, GroupElement> {
        &self.values
    }

    pub fn value(&self, e: EdgeId) -> Option<&GroupElement> {
        self.values.get(&e)
    }

    fn letter_matrix(&self, l: Letter) -> Result<CMatrix, ConnectionError> {
        let v = self.values.get(&l.edge).ok_or(ConnectionError::MissingEdge(l.edge))?;
        Ok(match l.orientation {
            Orientation::Forward => v.matrix().clone(),
            Orientation::Backward => v.matrix().adjoint(),
        })
    }

    /// Holonomy of a (not necessarily reduced) letter sequence, as the raw
    /// matrix product `H(l_k)⋯H(l_1)`.
    pub fn holonomy_matrix(&self, letters: &[Letter]) -> Result<CMatrix, ConnectionError> {
        let mut acc = CMatrix::identity(self.group.dim());
        for &l in letters {
            acc = &self.letter_matrix(l)? * &acc;
        }
        Ok(acc)
    }

    /// `H(p)`; multiplicative: `H(p ∘ q) = H(p) H(q)`.
    pub fn holonomy(&self, p: &PathWord) -> Result<GroupElement, ConnectionError> {
        self.graph.check_path(p)?;
        Ok(self.group.from_trusted(self.holonomy_matrix(p.letters())?))
    }
}

/// A gauge transformation at graph level: one group element per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteGauge {
    group: Group,
    values: BTreeMap<VertexId, GroupElement>,
}

impl DiscreteGauge {
    pub fn new(group: Group, values: BTreeMap<VertexId, GroupElement>) -> Result<Self, ConnectionError> {
        if values.values().any(|v| *v.group() != group) {
            return Err(GroupError::DescriptorMismatch.into());
        }
        Ok(DiscreteGauge { group, values })
    }

    pub fn identity(graph: &Graph, group: Group) -> Self {
        let values = graph.vertex_ids().map(|v| (v, group.identity())).collect();
        DiscreteGauge { group, values }
    }

    pub fn random(graph: &Graph, group: Group, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = graph.vertex_ids().map(|v| (v, group.sample(&mut rng))).collect();
        DiscreteGauge { group, values }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn values(&self) -> &BTreeMap<VertexId, GroupElement> {
        &self.values
    }

    pub fn value(&self, v: VertexId) -> Result<&GroupElement, ConnectionError> {
        self.values.get(&v).ok_or(ConnectionError::MissingVertex(v))
    }

    /// Pointwise product `(g g′)(x) = g(x) g′(x)`.
    pub fn product(&self, other: &DiscreteGauge) -> Result<DiscreteGauge, ConnectionError> {
        let mut values = BTreeMap::new();
        for (v, a) in &self.values {
            let b = other.value(*v)?;
            values.insert(*v, a.mul(b)?);
        }
        Ok(DiscreteGauge { group: self.group.clone(), values })
    }
}

/// `(H.g)(e) = g(dst)⁻¹ H(e) g(src)`. Satisfies `(H.g).g′ = H.(g g′)`.
pub fn gauge_act_general(h: &GeneralizedConnection, g: &DiscreteGauge) -> Result<GeneralizedConnection, ConnectionError> {
    if g.group != h.group {
        return Err(GroupError::DescriptorMismatch.into());
    }
    let mut values = BTreeMap::new();
    for e in h.graph.edges() {
        let src = g.value(e.source)?;
        let dst = g.value(e.target)?;
        let m = &(&dst.matrix().adjoint() * h.values[&e.id].matrix()) * src.matrix();
        values.insert(e.id, h.group.from_trusted(m));
    }
    Ok(GeneralizedConnection { graph: h.graph.clone(), group: h.group.clone(), values })
}

/// `p_K ∘ H` for a connection valued in the base of `quotient`.
pub fn pushforward_hom(quotient: &Group, h: &GeneralizedConnection) -> Result<GeneralizedConnection, ConnectionError> {
    let values = h
        .values
        .iter()
        .map(|(e, v)| Ok((*e, quotient_project(quotient, v)?)))
        .collect::<Result<BTreeMap<_, _>, GroupError>>()?;
    Ok(GeneralizedConnection { graph: h.graph.clone(), group: quotient.clone(), values })
}

