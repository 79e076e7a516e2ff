//! Parallel chunk evaluation for Haar means. Chunks are independent random
//! streams; results are gathered in chunk order and reduced pairwise, so the
//! estimate is the same for any number of worker threads.

use holonomy_core::cylindrical::{ChunkSum, HaarMean, MeanEstimate, TupleFunction};
use holonomy_core::CMatrix;
use rayon::prelude::*;

use crate::LabError;

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "HOLONOMY_LAB_THREADS";

/// Worker count from `HOLONOMY_LAB_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Result<Option<usize>, LabError> {
    match std::env::var(THREADS_VAR) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(LabError::Invalid(format!("{THREADS_VAR} must be a positive integer, found `{s}`"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs `f` inside a pool sized by [`thread_cap`].
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, LabError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| LabError::op("thread pool", e))?;
    Ok(pool.install(f))
}

/// Per-chunk partial sums, in chunk order.
pub fn chunk_sums<F: TupleFunction + Sync>(mean: &HaarMean<F>, hs: &[CMatrix]) -> Result<Vec<ChunkSum>, LabError> {
    (0..mean.chunk_count())
        .into_par_iter()
        .map(|c| mean.chunk(hs, c))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| LabError::op("haar mean", e))
}

/// Parallel counterpart of [`HaarMean::estimate`] with identical output.
pub fn parallel_estimate<F: TupleFunction + Sync>(mean: &HaarMean<F>, hs: &[CMatrix]) -> Result<MeanEstimate, LabError> {
    Ok(ChunkSum::reduce(&chunk_sums(mean, hs)?).estimate())
}
