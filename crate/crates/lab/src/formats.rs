//! JSON documents for graphs, groups, matrices, connections, cylindrical
//! functions and independent families, with conversions to core types.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use holonomy_core::connections::{Bump, BumpTerm, FamilyMember, GeneralizedConnection, IndependentFamily, PrivateSegment, SmoothConnection};
use holonomy_core::cylindrical::{CylFunction, Expr};
use holonomy_core::linalg::c64;
use holonomy_core::pathgroupoid::{Edge, PathWord, Vertex};
use holonomy_core::{CMatrix, EdgeId, Graph, Group, GroupDescriptor, VertexId};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::LabError;

/// Reads and parses a JSON file; parse errors carry the path, line and column.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, LabError> {
    let text = fs::read_to_string(path).map_err(|source| LabError::Read { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|source| LabError::Parse { path: path.display().to_string(), source })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: u32,
    pub src: u32,
    pub dst: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
    pub basepoint: u32,
}

impl GraphDoc {
    pub fn to_graph(&self) -> Result<Arc<Graph>, LabError> {
        let vertices = self.vertices.iter().map(|v| Vertex { id: VertexId(v.id), position: v.pos.clone() }).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { id: EdgeId(e.id), source: VertexId(e.src), target: VertexId(e.dst), curve: e.curve.clone() })
            .collect();
        Ok(Arc::new(Graph::new(vertices, edges, VertexId(self.basepoint)).map_err(|e| LabError::op("graph", e))?))
    }

    pub fn from_graph(g: &Graph) -> Self {
        GraphDoc {
            vertices: g.vertices().iter().map(|v| VertexDoc { id: v.id.0, pos: v.position.clone() }).collect(),
            edges: g.edges().iter().map(|e| EdgeDoc { id: e.id.0, src: e.source.0, dst: e.target.0, curve: e.curve.clone() }).collect(),
            basepoint: g.basepoint().0,
        }
    }
}

/// Matrices are written as rows of `[re, im]` pairs. A flat row-major list
/// of pairs is accepted on input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixDoc {
    Rows(Vec<Vec<[f64; 2]>>),
    Flat(Vec<[f64; 2]>),
}

impl MatrixDoc {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.dim();
        MatrixDoc::Rows((0..n).map(|i| (0..n).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect())
    }

    pub fn to_matrix(&self) -> Result<CMatrix, LabError> {
        let flat: Vec<[f64; 2]> = match self {
            MatrixDoc::Rows(rows) => {
                if rows.iter().any(|r| r.len() != rows.len()) {
                    return Err(LabError::Invalid("matrix rows must form a square".into()));
                }
                rows.iter().flatten().copied().collect()
            }
            MatrixDoc::Flat(v) => v.clone(),
        };
        let n = (flat.len() as f64).sqrt().round() as usize;
        CMatrix::from_row_major(n, flat.iter().map(|p| c64(p[0], p[1])).collect())
            .ok_or_else(|| LabError::Invalid(format!("{} entries do not form a square matrix", flat.len())))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DescriptorDoc {
    #[serde(rename = "U")]
    Unitary { n: usize },
    #[serde(rename = "SU")]
    SpecialUnitary { n: usize },
    #[serde(rename = "torus")]
    Torus { n: usize },
    #[serde(rename = "product")]
    Product { factors: Vec<DescriptorDoc> },
    #[serde(rename = "quotient")]
    Quotient {
        base: Box<DescriptorDoc>,
        #[serde(rename = "K")]
        kernel: Vec<MatrixDoc>,
    },
}

impl DescriptorDoc {
    pub fn to_descriptor(&self) -> Result<GroupDescriptor, LabError> {
        Ok(match self {
            DescriptorDoc::Unitary { n } => GroupDescriptor::Unitary(*n),
            DescriptorDoc::SpecialUnitary { n } => GroupDescriptor::SpecialUnitary(*n),
            DescriptorDoc::Torus { n } => GroupDescriptor::Torus(*n),
            DescriptorDoc::Product { factors } => {
                GroupDescriptor::Product(factors.iter().map(|f| f.to_descriptor()).collect::<Result<_, _>>()?)
            }
            DescriptorDoc::Quotient { base, kernel } => GroupDescriptor::Quotient {
                base: Box::new(base.to_descriptor()?),
                kernel: kernel.iter().map(|k| k.to_matrix()).collect::<Result<_, _>>()?,
            },
        })
    }

    pub fn to_group(&self) -> Result<Group, LabError> {
        Group::new(self.to_descriptor()?).map_err(|e| LabError::op("group", e))
    }

    pub fn from_descriptor(d: &GroupDescriptor) -> Self {
        match d {
            GroupDescriptor::Unitary(n) => DescriptorDoc::Unitary { n: *n },
            GroupDescriptor::SpecialUnitary(n) => DescriptorDoc::SpecialUnitary { n: *n },
            GroupDescriptor::Torus(n) => DescriptorDoc::Torus { n: *n },
            GroupDescriptor::Product(fs) => DescriptorDoc::Product { factors: fs.iter().map(Self::from_descriptor).collect() },
            GroupDescriptor::Quotient { base, kernel } => DescriptorDoc::Quotient {
                base: Box::new(Self::from_descriptor(base)),
                kernel: kernel.iter().map(MatrixDoc::from_matrix).collect(),
            },
        }
    }
}

/// Short group names for the command line: `su2`, `u3`, `t2`, and `u2q`
/// for `U(2)` as `(U(1) × SU(2))/{±1}`.
pub fn parse_group_name(name: &str) -> Result<Group, LabError> {
    let lower = name.to_ascii_lowercase();
    let bad = || LabError::Invalid(format!("unknown group `{name}`; expected e.g. su2, u3, t2 or u2q"));
    let (kind, rest) = if let Some(r) = lower.strip_prefix("su") {
        ("su", r)
    } else if let Some(r) = lower.strip_prefix('u') {
        ("u", r)
    } else if let Some(r) = lower.strip_prefix('t') {
        ("t", r)
    } else {
        return Err(bad());
    };
    let (digits, quotient) = match rest.strip_suffix('q') {
        Some(d) => (d, true),
        None => (rest, false),
    };
    let n: usize = digits.parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(bad());
    }
    Ok(match (kind, quotient) {
        ("su", false) => Group::special_unitary(n),
        ("u", false) => Group::unitary(n),
        ("t", false) => Group::torus(n),
        ("u", true) => Group::unitary_as_quotient(n),
        _ => return Err(bad()),
    })
}

/// Either a full descriptor document or a short name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Name(String),
    Descriptor(DescriptorDoc),
}

impl GroupRef {
    pub fn to_group(&self) -> Result<Group, LabError> {
        match self {
            GroupRef::Name(n) => parse_group_name(n),
            GroupRef::Descriptor(d) => d.to_group(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    #[serde(rename = "X")]
    pub x: MatrixDoc,
    pub center: Vec<f64>,
    pub radius: f64,
    pub direction: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupRef>,
    pub terms: Vec<TermDoc>,
}

impl SmoothDoc {
    pub fn to_connection(&self, group: &Group) -> Result<SmoothConnection, LabError> {
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let what = || format!("term {}", i + 1);
                let x = group.algebra_element(t.x.to_matrix()?).map_err(|e| LabError::Invalid(format!("{}: {e}", what())))?;
                let bump = Bump::new(t.center.clone(), t.radius).map_err(|e| LabError::Invalid(format!("{}: {e}", what())))?;
                BumpTerm::new(x, bump, t.direction.clone()).map_err(|e| LabError::Invalid(format!("{}: {e}", what())))
            })
            .collect::<Result<Vec<_>, LabError>>()?;
        SmoothConnection::new(group.clone(), terms).map_err(|e| LabError::op("smooth connection", e))
    }

    pub fn from_connection(a: &SmoothConnection) -> Self {
        SmoothDoc {
            group: Some(GroupRef::Descriptor(DescriptorDoc::from_descriptor(a.group().descriptor()))),
            terms: a
                .terms()
                .iter()
                .map(|t| TermDoc {
                    x: MatrixDoc::from_matrix(t.x().matrix()),
                    center: t.bump().center().to_vec(),
                    radius: t.bump().radius(),
                    direction: t.direction().to_vec(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeValueDoc {
    pub edge: u32,
    pub value: MatrixDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupRef>,
    pub values: Vec<EdgeValueDoc>,
}

impl GeneralDoc {
    pub fn to_connection(&self, graph: &Arc<Graph>, group: &Group) -> Result<GeneralizedConnection, LabError> {
        let mut values = BTreeMap::new();
        for v in &self.values {
            let m = v.value.to_matrix()?;
            let g = group.element(group.canonical(m)).map_err(|e| LabError::Invalid(format!("edge {}: {e}", v.edge)))?;
            values.insert(EdgeId(v.edge), g);
        }
        GeneralizedConnection::new(graph.clone(), group.clone(), values).map_err(|e| LabError::op("generalized connection", e))
    }

    pub fn from_connection(h: &GeneralizedConnection) -> Self {
        GeneralDoc {
            group: Some(GroupRef::Descriptor(DescriptorDoc::from_descriptor(h.group().descriptor()))),
            values: h.values().iter().map(|(e, v)| EdgeValueDoc { edge: e.0, value: MatrixDoc::from_matrix(v.matrix()) }).collect(),
        }
    }
}

/// A connection file: smooth (`terms`) or generalized (`values`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConnectionDoc {
    Smooth(SmoothDoc),
    General(GeneralDoc),
}

impl ConnectionDoc {
    pub fn group_ref(&self) -> Option<&GroupRef> {
        match self {
            ConnectionDoc::Smooth(s) => s.group.as_ref(),
            ConnectionDoc::General(g) => g.group.as_ref(),
        }
    }
}

/// Expression nodes; indices are one-based in files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExprDoc {
    Entry([usize; 3]),
    Conj(Box<ExprDoc>),
    Trace(usize),
    Const([f64; 2]),
    Add(Vec<ExprDoc>),
    Mul(Vec<ExprDoc>),
}

impl ExprDoc {
    pub fn to_expr(&self) -> Result<Expr, LabError> {
        let zero = |k: usize, what: &str| {
            k.checked_sub(1).ok_or_else(|| LabError::Invalid(format!("{what} indices are one-based, found 0")))
        };
        Ok(match self {
            ExprDoc::Entry([k, i, j]) => Expr::entry(zero(*k, "path")?, zero(*i, "row")?, zero(*j, "column")?),
            ExprDoc::Conj(e) => Expr::conj(e.to_expr()?),
            ExprDoc::Trace(k) => Expr::Trace(zero(*k, "path")?),
            ExprDoc::Const([re, im]) => Expr::constant(*re, *im),
            ExprDoc::Add(es) => Expr::Add(es.iter().map(|e| e.to_expr()).collect::<Result<_, _>>()?),
            ExprDoc::Mul(es) => Expr::Mul(es.iter().map(|e| e.to_expr()).collect::<Result<_, _>>()?),
        })
    }

    pub fn from_expr(e: &Expr) -> Self {
        match e {
            Expr::Entry { path, row, col } => ExprDoc::Entry([path + 1, row + 1, col + 1]),
            Expr::Conj(e) => ExprDoc::Conj(Box::new(Self::from_expr(e))),
            Expr::Trace(k) => ExprDoc::Trace(k + 1),
            Expr::Const(c) => ExprDoc::Const([c.re, c.im]),
            Expr::Add(es) => ExprDoc::Add(es.iter().map(Self::from_expr).collect()),
            Expr::Mul(es) => ExprDoc::Mul(es.iter().map(Self::from_expr).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionDoc {
    /// Paths as signed edge ids in traversal order.
    pub paths: Vec<Vec<i64>>,
    pub expr: ExprDoc,
}

impl FunctionDoc {
    pub fn to_function(&self, graph: &Graph) -> Result<CylFunction, LabError> {
        let paths = self.paths.iter().map(|p| path_from_ids(graph, p)).collect::<Result<Vec<_>, _>>()?;
        CylFunction::new(paths, self.expr.to_expr()?).map_err(|e| LabError::Invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrivateDoc {
    /// Zero-based letter of the member path.
    pub letter: usize,
    /// Zero-based interval of that letter's curve.
    pub interval: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberDoc {
    pub path: Vec<i64>,
    pub private: PrivateDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphDoc>,
    pub members: Vec<MemberDoc>,
}

impl FamilyDoc {
    pub fn to_family(&self, graph: &Arc<Graph>) -> Result<IndependentFamily, LabError> {
        let members = self
            .members
            .iter()
            .map(|m| {
                Ok(FamilyMember {
                    path: path_from_ids(graph, &m.path)?,
                    private: PrivateSegment { letter: m.private.letter, interval: m.private.interval },
                })
            })
            .collect::<Result<Vec<_>, LabError>>()?;
        IndependentFamily::new(graph.clone(), members).map_err(|e| LabError::op("independent family", e))
    }
}

pub fn path_from_ids(graph: &Graph, ids: &[i64]) -> Result<PathWord, LabError> {
    if ids.is_empty() {
        return graph.unit(graph.basepoint()).map_err(|e| LabError::Invalid(e.to_string()));
    }
    graph.path_from_signed(ids).map_err(|e| LabError::Invalid(format!("path {ids:?}: {e}")))
}

/// Parses `"e1,-e2"`, `"1,-2"` or `"e1,e2^-1"` into signed edge ids.
pub fn parse_path_spec(spec: &str) -> Result<Vec<i64>, LabError> {
    let mut out = Vec::new();
    for raw in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (neg, body) = match raw.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, raw),
        };
        let (body, inv) = match body.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (body, false),
        };
        let digits = body.strip_prefix('e').unwrap_or(body);
        let id: i64 = digits.parse().map_err(|_| LabError::Invalid(format!("cannot read `{raw}` as an edge")))?;
        if id <= 0 {
            return Err(LabError::Invalid(format!("edge ids are positive, found `{raw}`")));
        }
        out.push(if neg ^ inv { -id } else { id });
    }
    Ok(out)
}
