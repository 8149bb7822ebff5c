//! Sigmoid constructions: spike basis `phi`, gate `sigma(L t)`, and approximators whose
//! training loss can be pushed below any tolerance while the output dies off the grid.

use serde::{Deserialize, Serialize};

use super::basis::{sigmoid_spike, sigmoid_spike_first_layer};
use super::check::{check_b, grid_shape, DEFAULT_WIDTH_BUDGET};
use super::relu::{multi_indices, tensor_row};
use crate::error::{Error, Result};
use crate::grid::{grid_1d, TrainingSet};
use crate::metadata::NetMetadata;
use crate::net::{loss, sigmoid, ActivationKind, DenseLayer, LossKind, Matrix, Mlp};

/// Spike steepness `k`, gate steepness `l`, truncation level `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmoidSpikeParams {
    pub k: f64,
    pub l: f64,
    pub b: f64,
}

impl SigmoidSpikeParams {
    pub const DEFAULT_K: f64 = 200.0;
    pub const DEFAULT_L: f64 = 150.0;

    pub fn new(k: f64, l: f64, b: f64) -> Self {
        SigmoidSpikeParams { k, l, b }
    }

    fn validate(&self, d: usize) -> Result<()> {
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::param(format!("K must be positive and finite, got {}", self.k)));
        }
        if !(self.l > 0.0 && self.l.is_finite()) {
            return Err(Error::param(format!("L must be positive and finite, got {}", self.l)));
        }
        check_b(self.b, d, "b")
    }

    /// Upper bound on the grid residual at every training point.
    ///
    /// The own gate misses 1 by `sigma(-L)`; every other gate sees `Phi <= d - 1 + phi(spacing)`.
    pub fn grid_residual_bound(&self, data: &TrainingSet) -> Result<f64> {
        let (n, d) = grid_shape(data)?;
        let df = d as f64;
        let spacing = 1.0 / (n - 1) as f64;
        let far = (df - 1.0 + sigmoid_spike(spacing, self.k) - self.b) / (df - self.b);
        let leak = sigmoid(self.l * far);
        let total: f64 = data.targets().iter().map(|y| y.abs()).sum();
        Ok(data
            .targets()
            .iter()
            .map(|y| y.abs() * sigmoid(-self.l) + (total - y.abs()) * leak)
            .fold(0.0, f64::max))
    }
}

fn approximator_sigmoid(
    data: &TrainingSet,
    params: &SigmoidSpikeParams,
    width_budget: u128,
    family: &str,
) -> Result<Mlp> {
    let (n, d) = grid_shape(data)?;
    params.validate(d)?;
    if data.len() as u128 > width_budget {
        return Err(Error::Budget {
            what: "second hidden layer (N^d neurons)".into(),
            required: data.len() as u128,
            budget: width_budget,
        });
    }
    let basis = sigmoid_spike_first_layer(&grid_1d(n)?, params.k, d)?;
    let df = d as f64;
    let scale = params.l / (df - params.b);
    let mut second = Matrix::zeros(data.len(), basis.width());
    for (k, idx) in multi_indices(n, d).enumerate() {
        let row = tensor_row(&basis, &idx);
        for (dst, w) in second.row_mut(k).iter_mut().zip(row) {
            *dst = scale * w;
        }
    }
    let second = DenseLayer::new(
        second,
        vec![-scale * params.b; data.len()],
        ActivationKind::Sigmoid,
    );
    let out = DenseLayer::new(
        Matrix::from_rows(vec![data.targets().to_vec()]).expect("one row"),
        vec![0.0],
        ActivationKind::Identity,
    );
    let meta = NetMetadata::new(family)
        .param("n", n)
        .param("d", d)
        .param("k", params.k)
        .param("l", params.l)
        .param("b", params.b)
        .output_bound(data.targets().iter().map(|y| y.abs()).sum());
    Ok(Mlp::new(d, vec![basis.layer, second, out])?.with_metadata(meta))
}

/// `sum_i y_i sigma(L (phi_i - b) / (1 - b))`: `H1 = 2N`, `H2 = N`.
pub fn approximator_1d_sigmoid(data: &TrainingSet, params: &SigmoidSpikeParams) -> Result<Mlp> {
    if data.dim() != 1 {
        return Err(Error::param("approximator_1d_sigmoid needs 1D data"));
    }
    approximator_sigmoid(data, params, DEFAULT_WIDTH_BUDGET, "sigmoid-approx-1d")
}

/// d-D version over `Phi = sum_j phi_j`: `H1 = 2dN`, `H2 = N^d`, `b in [d-1, d)`.
pub fn approximator_nd_sigmoid(data: &TrainingSet, params: &SigmoidSpikeParams) -> Result<Mlp> {
    approximator_nd_sigmoid_with_budget(data, params, DEFAULT_WIDTH_BUDGET)
}

pub fn approximator_nd_sigmoid_with_budget(
    data: &TrainingSet,
    params: &SigmoidSpikeParams,
    width_budget: u128,
) -> Result<Mlp> {
    if data.dim() < 2 {
        return Err(Error::param("approximator_nd_sigmoid needs d >= 2"));
    }
    approximator_sigmoid(data, params, width_budget, "sigmoid-approx-nd")
}

/// Parameter schedule for driving the grid loss down: step `i` uses `K = 50 * 2^i`,
/// `L = 150 * 2^i`, `b = d - 0.8 / 2^i`.
pub fn tolerance_schedule(d: usize) -> impl Iterator<Item = SigmoidSpikeParams> {
    let df = d as f64;
    (0..).map(move |i: i32| {
        let s = 2f64.powi(i);
        SigmoidSpikeParams::new(50.0 * s, 150.0 * s, df - 0.8 / s)
    })
}

/// First schedule entry whose network reaches `MSE <= tau` on `data`, with that MSE.
pub fn params_for_tolerance(
    data: &TrainingSet,
    tau: f64,
    max_steps: usize,
) -> Result<(SigmoidSpikeParams, f64)> {
    let d = data.dim();
    for params in tolerance_schedule(d).take(max_steps) {
        let net = approximator_sigmoid(data, &params, DEFAULT_WIDTH_BUDGET, "sigmoid-approx")?;
        let mse = loss(&net, data, LossKind::Mse)?;
        if mse <= tau {
            return Ok((params, mse));
        }
    }
    Err(Error::param(format!(
        "no schedule entry within {max_steps} steps reaches MSE <= {tau}"
    )))
}
