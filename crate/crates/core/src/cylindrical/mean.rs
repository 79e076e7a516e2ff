use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::expr::{evaluate, TupleFunction};
use super::CylError;
use crate::connections::{gauge_act_general, DiscreteGauge, GeneralizedConnection};
use crate::groups::Group;
use crate::linalg::{c64, CMatrix, C64};
use crate::pathgroupoid::{PathWord, VertexId};

/// Samples per independent random stream.
pub const DEFAULT_CHUNK: usize = 4096;

/// Monte Carlo estimate of a mean with its standard error (of the complex
/// mean, combining both components).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: C64,
    pub std_error: f64,
    pub samples: usize,
}

/// Partial sums from one chunk of samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChunkSum {
    pub sum: C64,
    pub sum_sq: f64,
    pub count: usize,
}

impl ChunkSum {
    fn zero() -> Self {
        ChunkSum { sum: c64(0.0, 0.0), sum_sq: 0.0, count: 0 }
    }

    fn merge(a: ChunkSum, b: ChunkSum) -> ChunkSum {
        ChunkSum { sum: a.sum + b.sum, sum_sq: a.sum_sq + b.sum_sq, count: a.count + b.count }
    }

    /// Pairwise reduction in index order, so the result does not depend on
    /// how the chunks were scheduled.
    pub fn reduce(chunks: &[ChunkSum]) -> ChunkSum {
        match chunks.len() {
            0 => ChunkSum::zero(),
            1 => chunks[0],
            n => ChunkSum::merge(Self::reduce(&chunks[..n / 2]), Self::reduce(&chunks[n / 2..])),
        }
    }

    pub fn estimate(&self) -> MeanEstimate {
        let n = self.count as f64;
        let mean = self.sum / n;
        let var = if self.count > 1 { ((self.sum_sq / n - mean.norm_sqr()) * n / (n - 1.0)).max(0.0) } else { 0.0 };
        MeanEstimate { mean, std_error: (var / n).sqrt(), samples: self.count }
    }
}

/// The mean-value map `⟨F⟩(H) = ∫ F(H.g) dg` estimated by Monte Carlo over
/// the distinct endpoints of `F`'s paths: each endpoint `x` gets an
/// independent Haar element `a(x)`, and path `λ` sees
/// `a(r(λ)) H(λ) a(s(λ))⁻¹`.
///
/// The sample stream is fixed by `seed`, so `⟨F⟩` is itself a deterministic
/// function of the same holonomies and can be averaged again.
#[derive(Debug, Clone)]
pub struct HaarMean<F> {
    inner: F,
    group: Group,
    samples: usize,
    seed: u64,
    chunk: usize,
    endpoints: Vec<VertexId>,
    slots: Vec<(usize, usize)>,
}

impl<F: TupleFunction> HaarMean<F> {
    pub fn new(inner: F, group: Group, samples: usize, seed: u64) -> Result<Self, CylError> {
        Self::with_chunk(inner, group, samples, seed, DEFAULT_CHUNK)
    }

    pub fn with_chunk(inner: F, group: Group, samples: usize, seed: u64, chunk: usize) -> Result<Self, CylError> {
        if samples == 0 || chunk == 0 {
            return Err(CylError::NoSamples);
        }
        let mut endpoints: Vec<VertexId> = Vec::new();
        for p in inner.paths() {
            for v in [p.range(), p.source()] {
                if !endpoints.contains(&v) {
                    endpoints.push(v);
                }
            }
        }
        endpoints.sort();
        let index = |v: VertexId| endpoints.binary_search(&v).expect("endpoint collected above");
        let slots = inner.paths().iter().map(|p| (index(p.range()), index(p.source()))).collect();
        Ok(HaarMean { inner, group, samples, seed, chunk, endpoints, slots })
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }

    /// The `d` distinct endpoints averaged over.
    pub fn endpoints(&self) -> &[VertexId] {
        &self.endpoints
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn chunk_count(&self) -> usize {
        self.samples.div_ceil(self.chunk)
    }

    /// Partial sums of chunk `c`, drawn from its own ChaCha stream. Chunks
    /// are independent and may be evaluated in any order or in parallel.
    pub fn chunk(&self, hs: &[CMatrix], c: usize) -> Result<ChunkSum, CylError> {
        if hs.len() != self.slots.len() {
            return Err(CylError::Arity { expected: self.slots.len(), found: hs.len() });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(c as u64);
        let start = c * self.chunk;
        let count = self.chunk.min(self.samples.saturating_sub(start));
        let mut acc = ChunkSum::zero();
        let mut moved = Vec::with_capacity(hs.len());
        for _ in 0..count {
            let a: Vec<CMatrix> = self.endpoints.iter().map(|_| self.group.sample_matrix(&mut rng)).collect();
            moved.clear();
            for (h, &(r, s)) in hs.iter().zip(&self.slots) {
                moved.push(&(&a[r] * h) * &a[s].adjoint());
            }
            let v = self.inner.eval_tuple(&moved)?;
            acc.sum += v;
            acc.sum_sq += v.norm_sqr();
            acc.count += 1;
        }
        Ok(acc)
    }

    /// Sequential estimate over all chunks.
    pub fn estimate(&self, hs: &[CMatrix]) -> Result<MeanEstimate, CylError> {
        let chunks = (0..self.chunk_count()).map(|c| self.chunk(hs, c)).collect::<Result<Vec<_>, _>>()?;
        Ok(ChunkSum::reduce(&chunks).estimate())
    }

    pub fn estimate_on(&self, h: &GeneralizedConnection) -> Result<MeanEstimate, CylError> {
        let hs = self
            .inner
            .paths()
            .iter()
            .map(|p| Ok(h.holonomy(p)?.into_matrix()))
            .collect::<Result<Vec<_>, CylError>>()?;
        self.estimate(&hs)
    }
}

impl<F: TupleFunction> TupleFunction for HaarMean<F> {
    fn paths(&self) -> &[PathWord] {
        self.inner.paths()
    }

    fn eval_tuple(&self, hs: &[CMatrix]) -> Result<C64, CylError> {
        Ok(self.estimate(hs)?.mean)
    }
}

/// `max_g |F(H.g) − F(H)|` over `trials` random discrete gauge
/// transformations.
pub fn invariance_check<F: TupleFunction + ?Sized>(f: &F, h: &GeneralizedConnection, trials: usize, seed: u64) -> Result<f64, CylError> {
    let base = evaluate(f, h)?;
    let mut worst: f64 = 0.0;
    for t in 0..trials {
        let g = DiscreteGauge::random(h.graph(), h.group().clone(), seed.wrapping_add(t as u64));
        let moved = gauge_act_general(h, &g)?;
        worst = worst.max((evaluate(f, &moved)? - base).norm());
    }
    Ok(worst)
}
