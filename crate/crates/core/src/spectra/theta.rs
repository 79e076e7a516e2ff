use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::SpectraError;
use crate::connections::GeneralizedConnection;
use crate::groups::{GroupElement, UNITARY_TOLERANCE};
use crate::pathgroupoid::{spanning_tree, EdgeId, Graph, Letter, PathWord, SpanningTree, VertexId};

/// Spanning-tree data presenting the loop group at the basepoint as the free
/// group on one generator `ℓ_e = e_{dst}⁻¹ · e · e_{src}` per non-tree edge.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaData {
    graph: Arc<Graph>,
    tree: SpanningTree,
    generators: Vec<PathWord>,
    generator_edges: Vec<EdgeId>,
}

impl ThetaData {
    pub fn new(graph: Arc<Graph>) -> Self {
        let tree = spanning_tree(&graph);
        let mut generators = Vec::new();
        let mut generator_edges = Vec::new();
        for e in graph.edges() {
            if tree.edges.contains(&e.id) {
                continue;
            }
            let mut letters = tree.paths[&e.source].letters().to_vec();
            letters.push(Letter::forward(e.id.0));
            letters.extend_from_slice(tree.paths[&e.target].inverse().letters());
            let l = graph.reduce(graph.basepoint(), &letters).expect("tree paths compose with their edge");
            generators.push(l);
            generator_edges.push(e.id);
        }
        ThetaData { graph, tree, generators, generator_edges }
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    /// Loop generators in increasing order of their non-tree edge.
    pub fn generators(&self) -> &[PathWord] {
        &self.generators
    }

    pub fn generator_edges(&self) -> &[EdgeId] {
        &self.generator_edges
    }

    fn check_graph(&self, graph: &Arc<Graph>) -> Result<(), SpectraError> {
        if Arc::ptr_eq(graph, &self.graph) || **graph == *self.graph {
            Ok(())
        } else {
            Err(SpectraError::GraphMismatch)
        }
    }
}

/// `Θ(H) = (H_⋆, g_H)`: values on the loop generators and the frame
/// `g_H(x) = H(e_x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaPair {
    pub loops: Vec<GroupElement>,
    pub frame: BTreeMap<VertexId, GroupElement>,
}

pub fn theta(h: &GeneralizedConnection, t: &ThetaData) -> Result<ThetaPair, SpectraError> {
    t.check_graph(h.graph())?;
    let loops = t.generators.iter().map(|l| h.holonomy(l)).collect::<Result<Vec<_>, _>>()?;
    let frame = t
        .tree
        .paths
        .iter()
        .map(|(v, p)| Ok((*v, h.holonomy(p)?)))
        .collect::<Result<BTreeMap<_, _>, SpectraError>>()?;
    Ok(ThetaPair { loops, frame })
}

/// Rebuilds the connection from loop values and a frame:
/// `H(e) = g(dst) · h(ℓ_e) · g(src)⁻¹`, with `h(ℓ_e) = 1` on tree edges.
pub fn theta_inverse(pair: &ThetaPair, t: &ThetaData) -> Result<GeneralizedConnection, SpectraError> {
    let star = t.graph.basepoint();
    let at_star = pair.frame.get(&star).ok_or(SpectraError::MissingFrame(star))?;
    let group = at_star.group().clone();
    let distance = at_star.distance(&group.identity());
    if distance > UNITARY_TOLERANCE {
        return Err(SpectraError::FrameNotIdentity { distance });
    }
    if pair.loops.len() != t.generators.len() {
        return Err(SpectraError::LoopCount { expected: t.generators.len(), found: pair.loops.len() });
    }
    let frame = |v: VertexId| pair.frame.get(&v).ok_or(SpectraError::MissingFrame(v));
    let loop_of: BTreeMap<EdgeId, &GroupElement> = t.generator_edges.iter().copied().zip(&pair.loops).collect();
    let mut values = BTreeMap::new();
    for e in t.graph.edges() {
        let dst = frame(e.target)?;
        let src = frame(e.source)?;
        let value = match loop_of.get(&e.id) {
            Some(l) => dst.mul(l)?.mul(&src.inv())?,
            None => dst.mul(&src.inv())?,
        };
        values.insert(e.id, value);
    }
    Ok(GeneralizedConnection::new(t.graph.clone(), group, values)?)
}
