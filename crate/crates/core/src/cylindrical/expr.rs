use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::CylError;
use crate::connections::GeneralizedConnection;
use crate::linalg::{c64, CMatrix, C64};
use crate::pathgroupoid::PathWord;

/// Polynomial in the entries, traces and conjugates of a tuple of
/// holonomies. Indices are zero-based.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// Entry `(row, col)` of the holonomy along path `path`.
    Entry { path: usize, row: usize, col: usize },
    Conj(Box<Expr>),
    /// Unnormalized trace of the holonomy along a path.
    Trace(usize),
    Const(C64),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
}

impl Expr {
    pub fn entry(path: usize, row: usize, col: usize) -> Expr {
        Expr::Entry { path, row, col }
    }

    pub fn conj(e: Expr) -> Expr {
        Expr::Conj(Box::new(e))
    }

    pub fn constant(re: f64, im: f64) -> Expr {
        Expr::Const(c64(re, im))
    }

    pub fn eval(&self, hs: &[CMatrix]) -> Result<C64, CylError> {
        Ok(match self {
            Expr::Entry { path, row, col } => {
                let h = hs.get(*path).ok_or(CylError::PathIndex { index: *path, paths: hs.len() })?;
                let dim = h.dim();
                if *row >= dim || *col >= dim {
                    return Err(CylError::EntryIndex { row: *row, col: *col, dim });
                }
                h[(*row, *col)]
            }
            Expr::Conj(e) => e.eval(hs)?.conj(),
            Expr::Trace(path) => hs.get(*path).ok_or(CylError::PathIndex { index: *path, paths: hs.len() })?.trace(),
            Expr::Const(c) => *c,
            Expr::Add(es) => {
                let mut acc = c64(0.0, 0.0);
                for e in es {
                    acc += e.eval(hs)?;
                }
                acc
            }
            Expr::Mul(es) => {
                let mut acc = c64(1.0, 0.0);
                for e in es {
                    acc *= e.eval(hs)?;
                }
                acc
            }
        })
    }

    /// Largest path index referenced, if any.
    pub fn max_path(&self) -> Option<usize> {
        match self {
            Expr::Entry { path, .. } | Expr::Trace(path) => Some(*path),
            Expr::Conj(e) => e.max_path(),
            Expr::Const(_) => None,
            Expr::Add(es) | Expr::Mul(es) => es.iter().filter_map(|e| e.max_path()).max(),
        }
    }

    /// Upper bound on `|self|` over `U(n)^m`: entries are bounded by one and
    /// traces by `n`.
    pub fn sup_bound(&self, n: usize) -> f64 {
        match self {
            Expr::Entry { .. } => 1.0,
            Expr::Conj(e) => e.sup_bound(n),
            Expr::Trace(_) => n as f64,
            Expr::Const(c) => c.norm(),
            Expr::Add(es) => es.iter().map(|e| e.sup_bound(n)).sum(),
            Expr::Mul(es) => es.iter().map(|e| e.sup_bound(n)).product(),
        }
    }
}

/// A function of the holonomies along a fixed list of paths.
pub trait TupleFunction {
    fn paths(&self) -> &[PathWord];
    fn eval_tuple(&self, hs: &[CMatrix]) -> Result<C64, CylError>;
}

/// `F(H) = f(H(λ_1), …, H(λ_m))`.
pub fn evaluate<F: TupleFunction + ?Sized>(f: &F, h: &GeneralizedConnection) -> Result<C64, CylError> {
    let hs = f
        .paths()
        .iter()
        .map(|p| Ok(h.holonomy(p)?.into_matrix()))
        .collect::<Result<Vec<_>, CylError>>()?;
    f.eval_tuple(&hs)
}

/// Cylindrical function `F_{λ_1…λ_m; f}` with `f` a polynomial expression.
#[derive(Debug, Clone, PartialEq)]
pub struct CylFunction {
    paths: Vec<PathWord>,
    expr: Expr,
}

impl CylFunction {
    pub fn new(paths: Vec<PathWord>, expr: Expr) -> Result<Self, CylError> {
        if let Some(index) = expr.max_path() {
            if index >= paths.len() {
                return Err(CylError::PathIndex { index, paths: paths.len() });
            }
        }
        Ok(CylFunction { paths, expr })
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn eval(&self, h: &GeneralizedConnection) -> Result<C64, CylError> {
        evaluate(self, h)
    }
}

impl TupleFunction for CylFunction {
    fn paths(&self) -> &[PathWord] {
        &self.paths
    }

    fn eval_tuple(&self, hs: &[CMatrix]) -> Result<C64, CylError> {
        if hs.len() != self.paths.len() {
            return Err(CylError::Arity { expected: self.paths.len(), found: hs.len() });
        }
        self.expr.eval(hs)
    }
}

/// `Φ_{i,j;λ}(H) = H(λ)_{ij}` (zero-based indices).
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentativeFunction {
    pub row: usize,
    pub col: usize,
    pub path: PathWord,
}

impl RepresentativeFunction {
    pub fn eval(&self, h: &GeneralizedConnection) -> Result<C64, CylError> {
        let m = h.holonomy(&self.path)?;
        let dim = m.matrix().dim();
        if self.row >= dim || self.col >= dim {
            return Err(CylError::EntryIndex { row: self.row, col: self.col, dim });
        }
        Ok(m.matrix()[(self.row, self.col)])
    }

    pub fn to_cylindrical(&self) -> CylFunction {
        CylFunction { paths: vec![self.path.clone()], expr: Expr::entry(0, self.row, self.col) }
    }
}

/// `T_λ(H) = Tr H(λ) / n` for a loop at the basepoint.
#[derive(Debug, Clone, PartialEq)]
pub struct WilsonFunction {
    pub path: PathWord,
}

impl WilsonFunction {
    pub fn eval(&self, h: &GeneralizedConnection) -> Result<C64, CylError> {
        let star = h.graph().basepoint();
        if !self.path.is_loop_at(star) {
            return Err(CylError::NotBasedLoop { expected: star, source_vertex: self.path.source(), range: self.path.range() });
        }
        Ok(h.holonomy(&self.path)?.trace_normalized())
    }

    /// The same function as an expression, for a group of dimension `n`.
    pub fn to_cylindrical(&self, n: usize) -> CylFunction {
        let expr = Expr::Mul(vec![Expr::constant(1.0 / n as f64, 0.0), Expr::Trace(0)]);
        CylFunction { paths: vec![self.path.clone()], expr }
    }
}
