use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg};

use super::graph::{reduce_letters, EdgeId, VertexId};
use super::PathError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Forward,
    Backward,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Forward => 1,
            Orientation::Backward => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Orientation::Forward => Orientation::Backward,
            Orientation::Backward => Orientation::Forward,
        }
    }
}

/// An oriented edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub edge: EdgeId,
    pub orientation: Orientation,
}

impl Letter {
    pub fn forward(edge: u32) -> Self {
        Letter { edge: EdgeId(edge), orientation: Orientation::Forward }
    }

    pub fn backward(edge: u32) -> Self {
        Letter { edge: EdgeId(edge), orientation: Orientation::Backward }
    }

    pub fn inverse(self) -> Self {
        Letter { edge: self.edge, orientation: self.orientation.flip() }
    }

    pub fn signed(self) -> i64 {
        self.orientation.sign() * self.edge.0 as i64
    }

    pub fn from_signed(id: i64) -> Option<Self> {
        let edge = u32::try_from(id.unsigned_abs()).ok().filter(|e| *e != 0)?;
        let orientation = if id > 0 { Orientation::Forward } else { Orientation::Backward };
        Some(Letter { edge: EdgeId(edge), orientation })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.orientation {
            Orientation::Forward => write!(f, "{}", self.edge),
            Orientation::Backward => write!(f, "{}^-1", self.edge),
        }
    }
}

/// A reduced word of oriented edges: an element of the free groupoid on a
/// graph.
///
/// Letters are stored in traversal order. Composition follows the
/// convention that `λγ` runs `γ` first, so `p.compose(&q)` needs
/// `q.range() == p.source()` and yields `q`'s letters followed by `p`'s.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWord {
    letters: Vec<Letter>,
    source: VertexId,
    range: VertexId,
}

impl PathWord {
    pub(crate) fn from_parts(source: VertexId, range: VertexId, letters: Vec<Letter>) -> Self {
        PathWord { letters, source, range }
    }

    pub(crate) fn unit(v: VertexId) -> Self {
        PathWord { letters: Vec::new(), source: v, range: v }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_loop_at(&self, v: VertexId) -> bool {
        self.source == v && self.range == v
    }

    /// `self ∘ first`: traverse `first`, then `self`.
    pub fn compose(&self, first: &PathWord) -> Result<PathWord, PathError> {
        if first.range != self.source {
            return Err(PathError::EndpointMismatch { expected: self.source, found: first.range });
        }
        let mut letters = first.letters.clone();
        letters.extend_from_slice(&self.letters);
        Ok(PathWord { letters: reduce_letters(&letters), source: first.source, range: self.range })
    }

    /// Traverse `self`, then `next`.
    pub fn then(&self, next: &PathWord) -> Result<PathWord, PathError> {
        next.compose(self)
    }

    pub fn inverse(&self) -> PathWord {
        PathWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
            source: self.range,
            range: self.source,
        }
    }

    /// Signed edge ids in traversal order.
    pub fn to_signed(&self) -> Vec<i64> {
        self.letters.iter().map(|l| l.signed()).collect()
    }

    /// Image in the free abelian group on edges.
    pub fn abelianize(&self) -> ExponentVector {
        ExponentVector::from_letters(&self.letters)
    }
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1_{}", self.source);
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Finitely supported integer vector indexed by edges.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(BTreeMap<EdgeId, i64>);

impl ExponentVector {
    pub fn zero() -> Self {
        ExponentVector(BTreeMap::new())
    }

    /// Signed letter counts.
    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut v = ExponentVector::zero();
        for l in letters {
            v.add_to(l.edge, l.orientation.sign());
        }
        v
    }

    pub fn add_to(&mut self, edge: EdgeId, amount: i64) {
        let entry = self.0.entry(edge).or_insert(0);
        *entry += amount;
        if *entry == 0 {
            self.0.remove(&edge);
        }
    }

    pub fn get(&self, edge: EdgeId) -> i64 {
        self.0.get(&edge).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, i64)> + '_ {
        self.0.iter().map(|(e, c)| (*e, *c))
    }
}

impl Add for &ExponentVector {
    type Output = ExponentVector;
    fn add(self, rhs: &ExponentVector) -> ExponentVector {
        let mut out = self.clone();
        for (e, c) in rhs.iter() {
            out.add_to(e, c);
        }
        out
    }
}

impl Neg for &ExponentVector {
    type Output = ExponentVector;
    fn neg(self) -> ExponentVector {
        ExponentVector(self.0.iter().map(|(e, c)| (*e, -c)).collect())
    }
}
