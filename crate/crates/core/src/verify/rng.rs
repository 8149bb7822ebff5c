//! Deterministic probe streams: ChaCha8 seeded once, one stream per fixed-size chunk of
//! sample indices, so parallel estimates do not depend on the worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Samples per chunk.
pub const CHUNK: u64 = 1 << 16;

/// Generator for chunk `chunk` of the stream named by `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// `(chunk index, sample count)` pairs covering `total` samples.
pub fn chunks(total: u64) -> impl Iterator<Item = (u64, u64)> {
    let full = total / CHUNK;
    let rest = total % CHUNK;
    (0..full)
        .map(|c| (c, CHUNK))
        .chain((rest > 0).then_some((full, rest)))
}

/// Uniform point in `[0,1)^d`.
pub fn uniform_point<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.random::<f64>()).collect()
}

/// Fills `buf` with a uniform point in `[0,1)^d`.
pub fn fill_uniform<R: Rng>(rng: &mut R, buf: &mut [f64]) {
    for v in buf {
        *v = rng.random::<f64>();
    }
}

/// Largest `g(x)` over `samples` uniform points, with its sample index and point.
/// NaN ranks above every number; ties go to the lower index.
pub(crate) fn par_max<G>(d: usize, samples: u64, seed: u64, g: G) -> Option<(f64, u64, Vec<f64>)>
where
    G: Fn(&[f64]) -> f64 + Sync,
{
    let rank = |v: f64| if v.is_nan() { f64::INFINITY } else { v };
    let chunks: Vec<_> = chunks(samples).collect();
    chunks
        .into_par_iter()
        .filter_map(|(c, count)| {
            let mut rng = chunk_rng(seed, c);
            let mut x = vec![0.0; d];
            let mut best: Option<(f64, u64, Vec<f64>)> = None;
            for i in 0..count {
                fill_uniform(&mut rng, &mut x);
                let v = g(&x);
                if best.as_ref().is_none_or(|b| rank(v) > rank(b.0)) {
                    best = Some((v, c * CHUNK + i, x.clone()));
                }
            }
            best
        })
        .reduce_with(|a, b| {
            if rank(b.0) > rank(a.0) || (rank(b.0) == rank(a.0) && b.1 < a.1) {
                b
            } else {
                a
            }
        })
}

/// Number of uniform points with `pred(x)`.
pub(crate) fn par_count<P>(d: usize, samples: u64, seed: u64, pred: P) -> u64
where
    P: Fn(&[f64]) -> bool + Sync,
{
    let chunks: Vec<_> = chunks(samples).collect();
    chunks
        .into_par_iter()
        .map(|(c, count)| {
            let mut rng = chunk_rng(seed, c);
            let mut x = vec![0.0; d];
            let mut hits = 0;
            for _ in 0..count {
                fill_uniform(&mut rng, &mut x);
                hits += pred(&x) as u64;
            }
            hits
        })
        .sum()
}
