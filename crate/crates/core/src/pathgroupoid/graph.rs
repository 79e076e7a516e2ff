use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;
use core::fmt;

use super::word::{Letter, Orientation, PathWord};
use super::PathError;

/// Vertex identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

/// Edge identifier. Must be non-zero so that words serialize as signed ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// A point of the model chart.
pub type Point = Vec<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: VertexId,
    pub position: Option<Point>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: EdgeId,
    pub source: VertexId,
    pub target: VertexId,
    /// Samples of a parametrized curve from `source` to `target`.
    pub curve: Option<Vec<Point>>,
}

/// A connected finite graph with a basepoint.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    basepoint: VertexId,
    vertex_index: BTreeMap<VertexId, usize>,
    edge_index: BTreeMap<EdgeId, usize>,
    chart_dim: Option<usize>,
}

impl Graph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>, basepoint: VertexId) -> Result<Self, PathError> {
        let mut vertex_index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.id, i).is_some() {
                return Err(PathError::DuplicateVertex(v.id));
            }
        }
        let mut edge_index = BTreeMap::new();
        for (i, e) in edges.iter().enumerate() {
            if e.id.0 == 0 {
                return Err(PathError::ZeroEdgeId);
            }
            if edge_index.insert(e.id, i).is_some() {
                return Err(PathError::DuplicateEdge(e.id));
            }
            for v in [e.source, e.target] {
                if !vertex_index.contains_key(&v) {
                    return Err(PathError::UnknownVertex(v));
                }
            }
            if let Some(curve) = &e.curve {
                if curve.len() < 2 {
                    return Err(PathError::BadCurve { edge: e.id, reason: "needs at least two samples" });
                }
            }
        }
        if !vertex_index.contains_key(&basepoint) {
            return Err(PathError::UnknownVertex(basepoint));
        }

        let mut chart_dim = None;
        let points = vertices
            .iter()
            .filter_map(|v| v.position.as_ref())
            .chain(edges.iter().filter_map(|e| e.curve.as_ref()).flatten());
        for p in points {
            match chart_dim {
                None => chart_dim = Some(p.len()),
                Some(d) if d != p.len() => return Err(PathError::ChartDimension { expected: d, found: p.len() }),
                _ => {}
            }
        }

        let graph = Graph { vertices, edges, basepoint, vertex_index, edge_index, chart_dim };
        let reached = graph.bfs_order().len();
        if reached != graph.vertices.len() {
            return Err(PathError::Disconnected { reached, total: graph.vertices.len() });
        }
        Ok(graph)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn basepoint(&self) -> VertexId {
        self.basepoint
    }

    pub fn chart_dim(&self) -> Option<usize> {
        self.chart_dim
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Vertex> {
        self.vertex_index.get(&id).map(|&i| &self.vertices[i])
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edge_index.get(&id).map(|&i| &self.edges[i])
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertex_index.keys().copied()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edge_index.keys().copied()
    }

    /// `(source, range)` of a letter.
    pub fn letter_endpoints(&self, letter: Letter) -> Option<(VertexId, VertexId)> {
        let e = self.edge(letter.edge)?;
        Some(match letter.orientation {
            Orientation::Forward => (e.source, e.target),
            Orientation::Backward => (e.target, e.source),
        })
    }

    /// Unit path at `v`.
    pub fn unit(&self, v: VertexId) -> Result<PathWord, PathError> {
        if self.vertex(v).is_none() {
            return Err(PathError::UnknownVertex(v));
        }
        Ok(PathWord::unit(v))
    }

    /// Reduces a raw letter list into a path word starting at `start`.
    /// Letters are in traversal order. Adjacent `e·e⁻¹` pairs cancel; the
    /// stack-based pass yields the unique free reduction.
    pub fn reduce(&self, start: VertexId, letters: &[Letter]) -> Result<PathWord, PathError> {
        if self.vertex(start).is_none() {
            return Err(PathError::UnknownVertex(start));
        }
        let mut at = start;
        for (index, &l) in letters.iter().enumerate() {
            let (s, r) = self.letter_endpoints(l).ok_or(PathError::UnknownEdge { index, edge: l.edge })?;
            if s != at {
                return Err(PathError::NotComposable { index });
            }
            at = r;
        }
        Ok(PathWord::from_parts(start, at, free_reduce(letters)))
    }

    /// Path from a non-empty letter list; the source is read off the first
    /// letter.
    pub fn path(&self, letters: &[Letter]) -> Result<PathWord, PathError> {
        let first = letters.first().ok_or(PathError::EmptyWithoutVertex)?;
        let (s, _) = self.letter_endpoints(*first).ok_or(PathError::UnknownEdge { index: 0, edge: first.edge })?;
        self.reduce(s, letters)
    }

    /// Path from signed edge ids (`-3` is edge 3 traversed backwards).
    pub fn path_from_signed(&self, ids: &[i64]) -> Result<PathWord, PathError> {
        let letters = ids
            .iter()
            .enumerate()
            .map(|(index, &id)| Letter::from_signed(id).ok_or(PathError::UnknownEdge { index, edge: EdgeId(0) }))
            .collect::<Result<Vec<_>, _>>()?;
        self.path(&letters)
    }

    /// Checks that every letter of `p` is an edge of this graph with
    /// matching endpoints.
    pub fn check_path(&self, p: &PathWord) -> Result<(), PathError> {
        let q = self.reduce(p.source(), p.letters())?;
        if q.range() != p.range() {
            return Err(PathError::EndpointMismatch { expected: p.range(), found: q.range() });
        }
        Ok(())
    }

    /// Samples of the curve of an edge: the stored curve, or the straight
    /// segment between embedded endpoints.
    pub fn edge_curve(&self, id: EdgeId) -> Option<Vec<Point>> {
        let e = self.edge(id)?;
        if let Some(c) = &e.curve {
            return Some(c.clone());
        }
        let a = self.vertex(e.source)?.position.clone()?;
        let b = self.vertex(e.target)?.position.clone()?;
        Some(alloc::vec![a, b])
    }

    /// Curve of a path: concatenated edge curves, reversed for backward
    /// letters. One entry per letter.
    pub fn path_curves(&self, p: &PathWord) -> Result<Vec<Vec<Point>>, PathError> {
        p.letters()
            .iter()
            .map(|l| {
                let mut c = self.edge_curve(l.edge).ok_or(PathError::NoGeometry(l.edge))?;
                if l.orientation == Orientation::Backward {
                    c.reverse();
                }
                Ok(c)
            })
            .collect()
    }

    /// Incident `(edge, neighbour, orientation)` triples of `v` sorted by
    /// edge id; self-loops are skipped.
    pub fn neighbours(&self, v: VertexId) -> Vec<(EdgeId, VertexId, Orientation)> {
        let mut out = Vec::new();
        for e in &self.edges {
            if e.source == e.target {
                continue;
            }
            if e.source == v {
                out.push((e.id, e.target, Orientation::Forward));
            } else if e.target == v {
                out.push((e.id, e.source, Orientation::Backward));
            }
        }
        out.sort_by_key(|t| t.0);
        out
    }

    /// Breadth-first discovery from the basepoint: `(vertex, tree letter
    /// used to reach it, parent)`; the basepoint comes first with no letter.
    pub(crate) fn bfs_order(&self) -> Vec<(VertexId, Option<(Letter, VertexId)>)> {
        let mut seen = BTreeSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(self.basepoint);
        queue.push_back(self.basepoint);
        order.push((self.basepoint, None));
        while let Some(v) = queue.pop_front() {
            for (edge, w, orientation) in self.neighbours(v) {
                if seen.insert(w) {
                    queue.push_back(w);
                    order.push((w, Some((Letter { edge, orientation }, v))));
                }
            }
        }
        order
    }
}

fn free_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        match stack.last() {
            Some(top) if *top == l.inverse() => {
                stack.pop();
            }
            _ => stack.push(l),
        }
    }
    stack
}

pub(crate) fn reduce_letters(letters: &[Letter]) -> Vec<Letter> {
    free_reduce(letters)
}
