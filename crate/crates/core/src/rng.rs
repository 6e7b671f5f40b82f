//! Seeded, splittable random streams and deterministic parallel reduction.
//!
//! Work of size `n` is cut into fixed chunks of [`CHUNK_SIZE`] draws. Chunk `k`
//! owns the ChaCha stream `k` keyed by the master seed, so draw `i` of chunk
//! `k` depends only on `(seed, k, i)`, never on the thread count.

use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

/// Draws per chunk.
pub const CHUNK_SIZE: usize = 4096;

pub type StreamRng = ChaCha20Rng;

/// Stream `chunk` of the master `seed`.
pub fn substream(seed: u64, chunk: u64) -> StreamRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Runs `f(chunk, index_range, rng)` for every chunk of `0..n` and returns the
/// results in chunk order. With `threads > 1` chunks are spread over a
/// dedicated rayon pool; the output is identical either way.
pub fn map_chunks<T, F>(n: usize, seed: u64, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, Range<usize>, &mut StreamRng) -> T + Sync,
{
    let chunks: Vec<(u64, Range<usize>)> = (0..n.div_ceil(CHUNK_SIZE))
        .map(|k| (k as u64, k * CHUNK_SIZE..((k + 1) * CHUNK_SIZE).min(n)))
        .collect();
    let run = |(k, range): &(u64, Range<usize>)| {
        let mut rng = substream(seed, *k);
        f(*k, range.clone(), &mut rng)
    };
    if threads <= 1 {
        return chunks.iter().map(run).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| chunks.par_iter().map(run).collect()),
        Err(_) => chunks.iter().map(run).collect(),
    }
}

/// Single-pass mean and variance (Welford), mergeable in a fixed order.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Chan et al. pairwise combination.
    pub fn merge(&mut self, other: &RunningStats) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        self.mean += d * other.n as f64 / n as f64;
        self.m2 += other.m2 + d * d * (self.n as f64 * other.n as f64) / n as f64;
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n - 1) as f64).max(0.0)
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.n == 0 {
            return f64::NAN;
        }
        (self.variance() / self.n as f64).sqrt()
    }
}

/// Merges per-chunk statistics in chunk order.
pub fn merge_all<'a>(parts: impl IntoIterator<Item = &'a RunningStats>) -> RunningStats {
    let mut out = RunningStats::default();
    for p in parts {
        out.merge(p);
    }
    out
}
