//! Closed-form evaluators written straight from the formulas, without the layer matrices.

#![allow(dead_code)]

pub fn relu(t: f64) -> f64 {
    t.max(0.0)
}

pub fn sigma(t: f64) -> f64 {
    1.0 / (1.0 + (-t).exp())
}

pub fn hat(t: f64, center: f64, h: f64) -> f64 {
    relu(1.0 - (t - center).abs() / h)
}

pub fn spike(t: f64, k: f64) -> f64 {
    (sigma(k * t + 1.0) - sigma(k * t - 1.0)) / (sigma(1.0) - sigma(-1.0))
}

pub fn centers(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

/// `a(I1 - b1)/(d - b1) - a(I2 - b2)/(d - b2)` with hats of half-width `1/(2(N-1))`.
/// `I1` takes the first-coordinate hats centred at or above 0.5, `I2` those below, and both
/// take every hat of the other coordinates.
pub fn classifier(x: &[f64], n: usize, b1: f64, b2: f64) -> f64 {
    let d = x.len() as f64;
    let h = 0.5 / (n - 1) as f64;
    let c = centers(n);
    let rest: f64 = x[1..].iter().map(|&t| c.iter().map(|&ci| hat(t, ci, h)).sum::<f64>()).sum();
    let upper: f64 = c.iter().filter(|&&ci| ci >= 0.5).map(|&ci| hat(x[0], ci, h)).sum();
    let lower: f64 = c.iter().filter(|&&ci| ci < 0.5).map(|&ci| hat(x[0], ci, h)).sum();
    relu(upper + rest - b1) / (d - b1) - relu(lower + rest - b2) / (d - b2)
}

/// Cross-entropy variant: `1/2 + classifier / 2`.
pub fn classifier_ce(x: &[f64], n: usize, b1: f64, b2: f64) -> f64 {
    0.5 + 0.5 * classifier(x, n, b1, b2)
}

fn multi_index(mut flat: usize, n: usize, d: usize) -> Vec<usize> {
    let mut idx = vec![0; d];
    for slot in idx.iter_mut().rev() {
        *slot = flat % n;
        flat /= n;
    }
    idx
}

/// `sum_k y_k a(Phi_k - b)/(d - b)` with overlapping hats of half-width `1/(N-1)`.
pub fn approximator(x: &[f64], n: usize, ys: &[f64], b: f64) -> f64 {
    let d = x.len();
    let h = 1.0 / (n - 1) as f64;
    let c = centers(n);
    ys.iter()
        .enumerate()
        .map(|(k, y)| {
            let phi: f64 = multi_index(k, n, d)
                .iter()
                .zip(x)
                .map(|(&i, &t)| hat(t, c[i], h))
                .sum();
            y * relu(phi - b) / (d as f64 - b)
        })
        .sum()
}

/// `sum_k y_k sigma(L (Phi_k - b)/(d - b))` over sigmoid spikes.
pub fn sigmoid_approximator(x: &[f64], n: usize, ys: &[f64], k: f64, l: f64, b: f64) -> f64 {
    let d = x.len();
    let c = centers(n);
    ys.iter()
        .enumerate()
        .map(|(idx, y)| {
            let phi: f64 = multi_index(idx, n, d)
                .iter()
                .zip(x)
                .map(|(&i, &t)| spike(t - c[i], k))
                .sum();
            y * sigma(l * (phi - b) / (d as f64 - b))
        })
        .sum()
}

/// `-a(D - b)/(P - b) + a(B - b)/(P - b)`; `D` sums the hats of dark grid values over all
/// pixels, `B` those of light values.
pub fn image(x: &[f64], step: u32, b: f64) -> f64 {
    let p = x.len() as f64;
    let values: Vec<u32> = (0..=255 / step).map(|i| i * step).collect();
    let h = step as f64 / (2.0 * 255.0);
    let sum = |dark: bool| -> f64 {
        x.iter()
            .map(|&t| {
                values
                    .iter()
                    .filter(|&&v| (v < 128) == dark)
                    .map(|&v| hat(t, v as f64 / 255.0, h))
                    .sum::<f64>()
            })
            .sum()
    };
    -relu(sum(true) - b) / (p - b) + relu(sum(false) - b) / (p - b)
}

/// Depth-extension recurrence applied to a scalar `f` for a sigmoid carrier.
pub fn sigmoid_extension(f: f64, eps: f64, c: f64, layers: usize) -> f64 {
    let ac = sigma(c);
    let slope = ac * (1.0 - ac);
    let mut p = eps * f + c;
    for _ in 1..layers {
        p = sigma(p) / slope - ac / slope + c;
    }
    sigma(p) / (slope * eps) - ac / (slope * eps)
}
