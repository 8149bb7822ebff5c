#![allow(dead_code)]

pub mod oracle;

use overfit_forge::verify::rng::{chunk_rng, uniform_point};

/// `count` uniform points of `[0,1]^d` from the given seed.
pub fn points(d: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = chunk_rng(seed, 0);
    (0..count).map(|_| uniform_point(&mut rng, d)).collect()
}

/// Largest `|a(x) - b(x)|` over `xs`.
pub fn max_gap(xs: &[Vec<f64>], a: impl Fn(&[f64]) -> f64, b: impl Fn(&[f64]) -> f64) -> f64 {
    xs.iter().map(|x| (a(x) - b(x)).abs()).fold(0.0, f64::max)
}
