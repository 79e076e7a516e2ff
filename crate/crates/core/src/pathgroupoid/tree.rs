use alloc::collections::{BTreeMap, BTreeSet};

use super::graph::{EdgeId, Graph, VertexId};
use super::word::PathWord;

/// Tree paths `e_x` from the basepoint to every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    pub paths: BTreeMap<VertexId, PathWord>,
    pub edges: BTreeSet<EdgeId>,
}

impl SpanningTree {
    pub fn path_to(&self, v: VertexId) -> Option<&PathWord> {
        self.paths.get(&v)
    }
}

/// Breadth-first spanning tree rooted at the basepoint, exploring incident
/// edges in increasing id order. `e_⋆` is the unit at the basepoint.
pub fn spanning_tree(graph: &Graph) -> SpanningTree {
    let mut paths = BTreeMap::new();
    let mut edges = BTreeSet::new();
    for (v, via) in graph.bfs_order() {
        let path = match via {
            None => PathWord::unit(v),
            Some((letter, parent)) => {
                edges.insert(letter.edge);
                let parent_path: &PathWord = &paths[&parent];
                let mut letters = parent_path.letters().to_vec();
                letters.push(letter);
                PathWord::from_parts(graph.basepoint(), v, letters)
            }
        };
        paths.insert(v, path);
    }
    SpanningTree { paths, edges }
}
