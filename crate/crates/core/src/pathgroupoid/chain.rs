use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::graph::{EdgeId, Graph};
use super::word::PathWord;

/// Grid used to identify curve samples shared between edges.
const QUANTUM: f64 = 1e-9;

/// An unoriented elementary segment of the embedded graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SegmentKey {
    /// Straight piece between two quantized chart points, stored with the
    /// lexicographically smaller endpoint first.
    Geometric(Vec<i64>, Vec<i64>),
    /// An edge without geometry counts as its own segment.
    Abstract(EdgeId),
}

/// Net signed traversal count of every elementary segment: the 1-chain
/// carried by a path. Abelian holonomies of smooth connections depend only
/// on this chain.
pub type SegmentChain = BTreeMap<SegmentKey, i64>;

fn quantize(p: &[f64]) -> Vec<i64> {
    p.iter().map(|x| (x / QUANTUM).round() as i64).collect()
}

/// 1-chain of `p`. Edges whose curves share sample points share segments,
/// so an edge that retraces other edges contributes to their segments.
pub fn segment_chain(graph: &Graph, p: &PathWord) -> SegmentChain {
    let mut chain = SegmentChain::new();
    for l in p.letters() {
        let sign = l.orientation.sign();
        match graph.edge_curve(l.edge) {
            Some(curve) => {
                for w in curve.windows(2) {
                    let a = quantize(&w[0]);
                    let b = quantize(&w[1]);
                    if a == b {
                        continue;
                    }
                    let (key, s) = if a < b { (SegmentKey::Geometric(a, b), sign) } else { (SegmentKey::Geometric(b, a), -sign) };
                    bump(&mut chain, key, s);
                }
            }
            None => bump(&mut chain, SegmentKey::Abstract(l.edge), sign),
        }
    }
    chain
}

fn bump(chain: &mut SegmentChain, key: SegmentKey, amount: i64) {
    let entry = chain.entry(key.clone()).or_insert(0);
    *entry += amount;
    if *entry == 0 {
        chain.remove(&key);
    }
}
