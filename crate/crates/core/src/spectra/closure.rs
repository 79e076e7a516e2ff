use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use super::normal_form::advance;
use super::theta::{theta, ThetaData};
use super::SpectraError;
use crate::connections::GeneralizedConnection;
use crate::groups::GroupDescriptor;
use crate::linalg::{c64, CMatrix, C64};
use crate::pathgroupoid::{segment_chain, Graph, PathWord, SegmentKey};

/// Default bound on `|v|_1` for relation vectors.
pub const DEFAULT_BOUND: usize = 12;
/// A torus value within this distance of 1 satisfies a relation.
pub const RELATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosureMode {
    /// Semisimple groups: smooth holonomies are dense, everything is in the
    /// closure.
    SemisimpleFull,
    /// Torus groups: members factor through the segment chains.
    TorusAbelianized,
    /// Products: each block is tested on its own.
    ProductSplit,
    /// `(T^n × S)/K` and `U(n)`: members lift through the kernel to a member
    /// of the covering product.
    QuotientPushforward,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureDescriptor {
    descriptor: GroupDescriptor,
    mode: ClosureMode,
}

impl ClosureDescriptor {
    pub fn new(descriptor: GroupDescriptor, mode: ClosureMode) -> Result<Self, SpectraError> {
        let ok = match mode {
            ClosureMode::SemisimpleFull => descriptor.is_semisimple(),
            ClosureMode::TorusAbelianized => matches!(descriptor, GroupDescriptor::Torus(_) | GroupDescriptor::Unitary(1)),
            ClosureMode::ProductSplit => matches!(descriptor, GroupDescriptor::Product(_)),
            ClosureMode::QuotientPushforward => {
                matches!(descriptor, GroupDescriptor::Quotient { .. }) || matches!(descriptor, GroupDescriptor::Unitary(n) if n >= 2)
            }
        };
        if !ok {
            return Err(SpectraError::ModeMismatch("mode does not match the descriptor kind"));
        }
        Ok(ClosureDescriptor { descriptor, mode })
    }

    /// The natural mode for a descriptor.
    pub fn for_descriptor(descriptor: GroupDescriptor) -> Self {
        let mode = match &descriptor {
            GroupDescriptor::Torus(_) | GroupDescriptor::Unitary(1) => ClosureMode::TorusAbelianized,
            GroupDescriptor::Unitary(_) | GroupDescriptor::Quotient { .. } => ClosureMode::QuotientPushforward,
            GroupDescriptor::Product(_) => ClosureMode::ProductSplit,
            GroupDescriptor::SpecialUnitary(_) => ClosureMode::SemisimpleFull,
        };
        ClosureDescriptor { descriptor, mode }
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn mode(&self) -> ClosureMode {
        self.mode
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClosureVerdict {
    Member,
    /// A relation among the loop generators that the torus part violates.
    /// `word` lists signed one-based generator indices in written order.
    NotMember { word: Vec<i64>, path: PathWord, value: C64 },
}

impl ClosureVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, ClosureVerdict::Member)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockVerdict {
    pub offset: usize,
    pub descriptor: GroupDescriptor,
    pub verdict: ClosureVerdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureReport {
    pub mode: ClosureMode,
    /// Relations were enumerated up to this `|v|_1`; membership is certified
    /// only against them.
    pub bound: usize,
    pub relations: usize,
    pub verdict: ClosureVerdict,
    pub blocks: Vec<BlockVerdict>,
    /// Kernel index per generator of the successful lift, for quotients.
    pub lift: Option<Vec<usize>>,
}

/// Integer vectors `v` with `0 < |v|_1 ≤ bound`, first nonzero entry
/// positive, and `Σ v_i chain(ℓ_i) = 0`: the words in the generators that
/// every smooth torus connection sends to the identity.
pub fn zero_chain_relations(graph: &Graph, generators: &[PathWord], bound: usize) -> Vec<Vec<i64>> {
    let chains: Vec<BTreeMap<SegmentKey, i64>> = generators.iter().map(|l| segment_chain(graph, l)).collect();
    let r = chains.len();
    // A generator owning a segment no other candidate touches has zero
    // coefficient in every relation.
    let mut candidates: BTreeSet<usize> = (0..r).collect();
    loop {
        let mut users: BTreeMap<&SegmentKey, usize> = BTreeMap::new();
        for &i in &candidates {
            for k in chains[i].keys() {
                *users.entry(k).or_insert(0) += 1;
            }
        }
        let lonely: Vec<usize> = candidates.iter().copied().filter(|&i| chains[i].keys().any(|k| users[k] == 1)).collect();
        if lonely.is_empty() {
            break;
        }
        for i in lonely {
            candidates.remove(&i);
        }
    }
    let active: Vec<usize> = candidates.into_iter().collect();
    let mut out = Vec::new();
    let mut v = vec![0i64; r];
    enumerate(&chains, &active, 0, bound, false, &mut v, &mut out);
    out
}

fn enumerate(
    chains: &[BTreeMap<SegmentKey, i64>],
    active: &[usize],
    pos: usize,
    budget: usize,
    started: bool,
    v: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if pos == active.len() {
        if started && chain_vanishes(chains, v) {
            out.push(v.clone());
        }
        return;
    }
    let i = active[pos];
    let b = budget as i64;
    let lo = if started { -b } else { 0 };
    for c in lo..=b {
        v[i] = c;
        enumerate(chains, active, pos + 1, budget - c.unsigned_abs() as usize, started || c != 0, v, out);
    }
    v[i] = 0;
}

fn chain_vanishes(chains: &[BTreeMap<SegmentKey, i64>], v: &[i64]) -> bool {
    let mut total: BTreeMap<&SegmentKey, i64> = BTreeMap::new();
    for (chain, &c) in chains.iter().zip(v) {
        if c == 0 {
            continue;
        }
        for (k, n) in chain {
            *total.entry(k).or_insert(0) += c * n;
        }
    }
    total.values().all(|&n| n == 0)
}

fn relation_word(v: &[i64]) -> Vec<i64> {
    let mut w = Vec::new();
    for (i, &c) in v.iter().enumerate() {
        let letter = (i as i64 + 1) * c.signum();
        w.extend(core::iter::repeat_n(letter, c.unsigned_abs() as usize));
    }
    w
}

fn word_path(generators: &[PathWord], word: &[i64]) -> Result<PathWord, SpectraError> {
    let pick = |w: i64| {
        let l = &generators[w.unsigned_abs() as usize - 1];
        if w > 0 { l.clone() } else { l.inverse() }
    };
    let mut acc = pick(word[0]);
    for &w in &word[1..] {
        acc = acc.compose(&pick(w))?;
    }
    Ok(acc)
}

fn power(z: C64, k: i64) -> C64 {
    let base = if k < 0 { z.conj() } else { z };
    (0..k.unsigned_abs()).fold(c64(1.0, 0.0), |acc, _| acc * base)
}

struct Relations<'a> {
    generators: &'a [PathWord],
    list: Vec<Vec<i64>>,
    /// Generators that occur in some relation.
    active: Vec<usize>,
}

impl Relations<'_> {
    /// First relation violated by the per-generator torus values `z[i][d]`.
    fn violation(&self, z: &[Vec<C64>]) -> Result<Option<ClosureVerdict>, SpectraError> {
        let width = z.first().map_or(0, Vec::len);
        for v in &self.list {
            for d in 0..width {
                let value = v.iter().zip(z).fold(c64(1.0, 0.0), |acc, (&c, zi)| acc * power(zi[d], c));
                if (value - 1.0).norm() > RELATION_TOLERANCE {
                    let word = relation_word(v);
                    let path = word_path(self.generators, &word)?;
                    return Ok(Some(ClosureVerdict::NotMember { word, path, value }));
                }
            }
        }
        Ok(None)
    }

    /// Verdict for one block of the loop values.
    fn block(&self, desc: &GroupDescriptor, offset: usize, loops: &[CMatrix]) -> Result<ClosureVerdict, SpectraError> {
        let n = desc.dim();
        match desc {
            GroupDescriptor::Torus(_) | GroupDescriptor::Unitary(1) => {
                let z: Vec<Vec<C64>> = loops.iter().map(|h| (0..n).map(|d| h[(offset + d, offset + d)]).collect()).collect();
                Ok(self.violation(&z)?.unwrap_or(ClosureVerdict::Member))
            }
            GroupDescriptor::Unitary(_) => {
                // U(n) = (U(1) × SU(n)) / Z_n: lift the determinant through
                // every choice of n-th root on the active generators.
                let roots: Vec<C64> = loops.iter().map(|h| C64::from_polar(1.0, h.block(offset, n).det().arg() / n as f64)).collect();
                let zeta = C64::from_polar(1.0, 2.0 * PI / n as f64);
                let mut k = vec![0usize; self.active.len()];
                let mut first = None;
                loop {
                    let mut z: Vec<Vec<C64>> = roots.iter().map(|w| vec![*w]).collect();
                    for (&i, &ki) in self.active.iter().zip(&k) {
                        z[i][0] *= power(zeta, ki as i64);
                    }
                    match self.violation(&z)? {
                        None => return Ok(ClosureVerdict::Member),
                        Some(v) => {
                            first.get_or_insert(v);
                        }
                    }
                    if !advance(&mut k, n) {
                        break;
                    }
                }
                Ok(first.expect("at least one lift tried"))
            }
            // Semisimple blocks: smooth holonomies are dense.
            _ => Ok(ClosureVerdict::Member),
        }
    }

    fn blocks(&self, desc: &GroupDescriptor, loops: &[CMatrix]) -> Result<Vec<BlockVerdict>, SpectraError> {
        desc.blocks()
            .into_iter()
            .map(|(offset, d)| Ok(BlockVerdict { offset, verdict: self.block(&d, offset, loops)?, descriptor: d }))
            .collect()
    }
}

fn conjunction(blocks: &[BlockVerdict]) -> ClosureVerdict {
    blocks.iter().find(|b| !b.verdict.is_member()).map_or(ClosureVerdict::Member, |b| b.verdict.clone())
}

/// Tests whether `H` lies in the closure of the smooth holonomies at the
/// level of the graph's loop generators. Relations among generators are
/// enumerated up to `|v|_1 ≤ bound`.
pub fn closure_membership(
    h: &GeneralizedConnection,
    cd: &ClosureDescriptor,
    t: &ThetaData,
    bound: usize,
) -> Result<ClosureReport, SpectraError> {
    if h.group().descriptor() != cd.descriptor() {
        return Err(SpectraError::ModeMismatch("closure descriptor differs from the connection's group"));
    }
    let loops: Vec<CMatrix> = theta(h, t)?.loops.into_iter().map(|g| g.into_matrix()).collect();
    let list = if cd.mode == ClosureMode::SemisimpleFull { Vec::new() } else { zero_chain_relations(t.graph(), t.generators(), bound) };
    let active: Vec<usize> = (0..loops.len()).filter(|&i| list.iter().any(|v| v[i] != 0)).collect();
    let rel = Relations { generators: t.generators(), list, active };
    let desc = cd.descriptor();
    let mut lift = None;
    let blocks = match cd.mode {
        ClosureMode::SemisimpleFull | ClosureMode::TorusAbelianized | ClosureMode::ProductSplit => rel.blocks(desc, &loops)?,
        ClosureMode::QuotientPushforward => match h.group().kernel() {
            None => rel.blocks(desc, &loops)?,
            Some(kernel) => {
                let base = h.group().base();
                let mut k = vec![0usize; rel.active.len()];
                let mut first = None;
                loop {
                    let mut lifted = loops.clone();
                    for (&i, &ki) in rel.active.iter().zip(&k) {
                        lifted[i] = &loops[i] * &kernel[ki];
                    }
                    let blocks = rel.blocks(base.descriptor(), &lifted)?;
                    if conjunction(&blocks).is_member() {
                        let mut full = vec![0usize; loops.len()];
                        for (&i, &ki) in rel.active.iter().zip(&k) {
                            full[i] = ki;
                        }
                        lift = Some(full);
                        first = Some(blocks);
                        break;
                    }
                    first.get_or_insert(blocks);
                    if !advance(&mut k, kernel.len()) {
                        break;
                    }
                }
                first.expect("at least one lift tried")
            }
        },
    };
    Ok(ClosureReport { mode: cd.mode, bound, relations: rel.list.len(), verdict: conjunction(&blocks), blocks, lift })
}
