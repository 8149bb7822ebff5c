//! First hidden layers that realise 1D basis functions (hats and sigmoid spikes) in every
//! input dimension, together with the linear map from neuron outputs to basis values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::{sigmoid, ActivationKind, DenseLayer, Matrix};

/// How neighbouring hats relate to the grid spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HatMode {
    /// Half-width = spacing / 2; supports only touch. `2N + 1` neurons per dimension.
    Disjoint,
    /// Half-width = spacing; hats form a partition of unity. `N + 2` neurons per dimension.
    Overlapping,
}

/// Uniformly spaced hat centers and the half-width implied by the mode.
#[derive(Debug, Clone, PartialEq)]
pub struct HatLayout {
    pub centers: Vec<f64>,
    pub half_width: f64,
    pub mode: HatMode,
    /// Share the `x - x_i - h = x - x_{i+1} + h` knots between neighbours (the minimal width).
    /// `false` gives three private neurons per hat, for cross-checks.
    pub shared: bool,
}

const UNIFORM_TOL: f64 = 1e-9;

impl HatLayout {
    pub fn uniform(centers: Vec<f64>, mode: HatMode) -> Result<Self> {
        if centers.len() < 2 {
            return Err(Error::param("a hat layout needs at least two centers"));
        }
        let spacing = centers[1] - centers[0];
        if spacing.is_nan() || spacing <= 0.0 {
            return Err(Error::param("hat centers must be strictly increasing"));
        }
        for w in centers.windows(2) {
            if ((w[1] - w[0]) - spacing).abs() > UNIFORM_TOL * spacing.max(1.0) {
                return Err(Error::param(format!(
                    "hat centers are not uniform: gap {} differs from {spacing}",
                    w[1] - w[0]
                )));
            }
        }
        let half_width = match mode {
            HatMode::Disjoint => spacing / 2.0,
            HatMode::Overlapping => spacing,
        };
        Ok(HatLayout {
            centers,
            half_width,
            mode,
            shared: true,
        })
    }

    pub fn unshared(mut self) -> Self {
        self.shared = false;
        self
    }

    /// Neurons needed per input dimension.
    pub fn neurons_per_dim(&self) -> usize {
        let n = self.centers.len();
        match (self.shared, self.mode) {
            (false, _) => 3 * n,
            (true, HatMode::Disjoint) => 2 * n + 1,
            (true, HatMode::Overlapping) => n + 2,
        }
    }

    /// Knot positions of the per-dimension neurons and, per hat, the indices of its
    /// (left, center, right) knots.
    fn knots(&self) -> (Vec<f64>, Vec<[usize; 3]>) {
        let c = &self.centers;
        let h = self.half_width;
        let n = c.len();
        if !self.shared {
            let knots = c.iter().flat_map(|&x| [x - h, x, x + h]).collect();
            let idx = (0..n).map(|i| [3 * i, 3 * i + 1, 3 * i + 2]).collect();
            return (knots, idx);
        }
        match self.mode {
            HatMode::Disjoint => {
                // x_1 - h, then x_i and x_i + h (= x_{i+1} - h) for every center
                let mut knots = vec![c[0] - h];
                for &x in c {
                    knots.push(x);
                    knots.push(x + h);
                }
                let idx = (0..n).map(|i| [2 * i, 2 * i + 1, 2 * i + 2]).collect();
                (knots, idx)
            }
            HatMode::Overlapping => {
                // x_1 - h, the centers, x_N + h; neighbouring centers are each other's side knots
                let mut knots = vec![c[0] - h];
                knots.extend_from_slice(c);
                knots.push(c[n - 1] + h);
                let idx = (0..n).map(|i| [i, i + 1, i + 2]).collect();
                (knots, idx)
            }
        }
    }
}

/// One basis function of one input dimension, as a linear combination of first-layer outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisTerm {
    pub dim: usize,
    pub center_index: usize,
    pub center: f64,
    /// `(neuron, coefficient)` pairs.
    pub coefs: Vec<(usize, f64)>,
}

/// First hidden layer plus the combination map turning its outputs into basis values.
#[derive(Debug, Clone)]
pub struct Basis {
    pub layer: DenseLayer,
    /// Indexed by `dim * centers + center_index`.
    pub terms: Vec<BasisTerm>,
    pub centers_per_dim: usize,
}

impl Basis {
    pub fn width(&self) -> usize {
        self.layer.out_width()
    }

    pub fn term(&self, dim: usize, center_index: usize) -> &BasisTerm {
        &self.terms[dim * self.centers_per_dim + center_index]
    }

    /// Adds `scale * basis(dim, center_index)` to a second-layer weight row.
    pub fn accumulate(&self, row: &mut [f64], dim: usize, center_index: usize, scale: f64) {
        for &(neuron, coef) in &self.term(dim, center_index).coefs {
            row[neuron] += scale * coef;
        }
    }

    /// Basis values at `x`, computed through the layer (handy in tests and debugging).
    pub fn values(&self, x: &[f64]) -> Vec<f64> {
        let mut pre = Vec::new();
        self.layer.weights.affine_into(x, &self.layer.bias, &mut pre);
        let post: Vec<f64> = pre.iter().map(|&z| self.layer.activation.apply(z)).collect();
        self.terms
            .iter()
            .map(|t| t.coefs.iter().map(|&(n, c)| c * post[n]).sum())
            .collect()
    }
}

/// Hat layer for `dims` input coordinates with activation `relu` or parametric relu.
///
/// Each neuron computes `act(x_j - knot)`; hat `i` is
/// `(act(x - x_i + h) - 2 act(x - x_i) + act(x - x_i - h)) / ((1 - alpha) h)`.
pub fn hat_first_layer(layout: &HatLayout, dims: usize, activation: ActivationKind) -> Result<Basis> {
    let alpha = match activation {
        ActivationKind::Relu => 0.0,
        ActivationKind::ParametricRelu { alpha } => {
            if alpha == 1.0 || !alpha.is_finite() {
                return Err(Error::param(format!("parametric relu slope must differ from 1, got {alpha}")));
            }
            alpha
        }
        other => {
            return Err(Error::param(format!(
                "hat layers need relu or parametric relu, got {}",
                other.name()
            )))
        }
    };
    if dims == 0 {
        return Err(Error::param("hat layer needs at least one input dimension"));
    }
    let (knots, idx) = layout.knots();
    let per_dim = knots.len();
    let width = per_dim * dims;
    let mut weights = Matrix::zeros(width, dims);
    let mut bias = vec![0.0; width];
    for j in 0..dims {
        for (k, &knot) in knots.iter().enumerate() {
            let r = j * per_dim + k;
            weights.set(r, j, 1.0);
            bias[r] = -knot;
        }
    }
    let h = layout.half_width;
    let scale = 1.0 / ((1.0 - alpha) * h);
    let n = layout.centers.len();
    let mut terms = Vec::with_capacity(n * dims);
    for j in 0..dims {
        for (i, &[l, m, r]) in idx.iter().enumerate() {
            terms.push(BasisTerm {
                dim: j,
                center_index: i,
                center: layout.centers[i],
                coefs: vec![
                    (j * per_dim + l, scale),
                    (j * per_dim + m, -2.0 * scale),
                    (j * per_dim + r, scale),
                ],
            });
        }
    }
    Ok(Basis {
        layer: DenseLayer::new(weights, bias, activation),
        terms,
        centers_per_dim: n,
    })
}

/// `sigma(1) - sigma(-1)`, the spike normalisation.
pub fn spike_normalizer() -> f64 {
    sigmoid(1.0) - sigmoid(-1.0)
}

/// Sigmoid spike `(sigma(K t + 1) - sigma(K t - 1)) / (sigma(1) - sigma(-1))`.
pub fn sigmoid_spike(t: f64, k: f64) -> f64 {
    (sigmoid(k * t + 1.0) - sigmoid(k * t - 1.0)) / spike_normalizer()
}

/// Spike layer: per dimension and center, the neuron pair `sigma(K(x - x_i) + 1)`,
/// `sigma(K(x - x_i) - 1)`. `2N` neurons per dimension.
pub fn sigmoid_spike_first_layer(centers: &[f64], k: f64, dims: usize) -> Result<Basis> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::param(format!("spike steepness K must be positive and finite, got {k}")));
    }
    if centers.is_empty() || dims == 0 {
        return Err(Error::param("spike layer needs centers and at least one dimension"));
    }
    let n = centers.len();
    let width = 2 * n * dims;
    let mut weights = Matrix::zeros(width, dims);
    let mut bias = vec![0.0; width];
    let norm = 1.0 / spike_normalizer();
    let mut terms = Vec::with_capacity(n * dims);
    for j in 0..dims {
        for (i, &c) in centers.iter().enumerate() {
            let r = j * 2 * n + 2 * i;
            weights.set(r, j, k);
            weights.set(r + 1, j, k);
            bias[r] = -k * c + 1.0;
            bias[r + 1] = -k * c - 1.0;
            terms.push(BasisTerm {
                dim: j,
                center_index: i,
                center: c,
                coefs: vec![(r, norm), (r + 1, -norm)],
            });
        }
    }
    Ok(Basis {
        layer: DenseLayer::new(weights, bias, ActivationKind::Sigmoid),
        terms,
        centers_per_dim: n,
    })
}
