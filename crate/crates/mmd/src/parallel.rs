//! Order-preserving parallel map on scoped threads.
//!
//! Items are dealt out in contiguous chunks and results are written back by
//! index, so the output never depends on the worker count.

use std::num::NonZeroUsize;
use std::thread;

use mmd_core::sampler::{self, BlockSum, EstimateReport, SamplingPlan};
use mmd_core::DensityMatrix;

/// `0` means one worker per available core.
pub fn resolve_workers(requested: usize) -> usize {
    if requested > 0 {
        return requested;
    }
    thread::available_parallelism()
        .map(NonZeroUsize::get)
        .unwrap_or(1)
}

pub fn par_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = resolve_workers(workers).min(items.len()).max(1);
    if workers == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    let f = &f;
    thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

/// Monte Carlo estimate with blocks spread over `workers` threads. Bitwise
/// equal to [`sampler::estimate`] for any worker count.
pub fn estimate(
    plan: &SamplingPlan,
    state: &DensityMatrix,
    seed: u64,
    workers: usize,
) -> mmd_core::Result<EstimateReport> {
    let blocks: Vec<u64> = (0..plan.n_blocks()).collect();
    let sums = par_map(&blocks, workers, |&b| {
        sampler::evaluate_block(plan, state, seed, b)
    })
    .into_iter()
    .collect::<mmd_core::Result<Vec<BlockSum>>>()?;
    sampler::reduce(plan, state, seed, &sums)
}
