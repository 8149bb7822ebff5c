//! Parametric-ReLU constructions. Hats come from PReLU triples, and the ReLU truncation in
//! the second layer is replaced by a clipped ramp built from a PReLU neuron pair.

use super::basis::{hat_first_layer, Basis, HatLayout, HatMode};
use super::check::{check_b, grid_shape, max_abs, DEFAULT_WIDTH_BUDGET};
use super::relu::{halfspace_sums, multi_indices, tensor_row, ClassifierParams, CostVariant};
use crate::error::{Error, Result};
use crate::grid::{grid_1d, TrainingSet};
use crate::metadata::NetMetadata;
use crate::net::{ActivationKind, DenseLayer, Matrix, Mlp};

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha == 1.0 || !alpha.is_finite() {
        return Err(Error::param(format!(
            "parametric relu slope alpha must be finite and differ from 1, got {alpha}"
        )));
    }
    Ok(())
}

/// PReLU hat layer: same knots and sharing as the ReLU layer, map scaled by `1/((1-alpha) h)`.
pub fn prelu_hat_first_layer(layout: &HatLayout, dims: usize, alpha: f64) -> Result<Basis> {
    check_alpha(alpha)?;
    hat_first_layer(layout, dims, ActivationKind::ParametricRelu { alpha })
}

/// `a(s) = (sigma(s) - sigma(s - c) - alpha c) / (1 - alpha)`: 0 below 0, `s` on `[0, c)`,
/// `c` above.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClippedRamp {
    pub alpha: f64,
    pub c: f64,
}

/// Second-layer rows and output weights accumulated while wiring ramp pairs.
#[derive(Debug, Default)]
struct GadgetRows {
    rows: Vec<Vec<f64>>,
    bias: Vec<f64>,
    out: Vec<f64>,
    out_bias: f64,
}

impl ClippedRamp {
    /// Checks that `c` covers the analytic supremum of the wired signal.
    pub fn new(alpha: f64, c: f64, signal_sup: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::param(format!("clip level c must be positive, got {c}")));
        }
        if c < signal_sup {
            return Err(Error::param(format!(
                "clip level c = {c} is below the analytic sup {signal_sup} of the wired signal"
            )));
        }
        Ok(ClippedRamp { alpha, c })
    }

    /// `c = sup + 1`.
    pub fn auto(alpha: f64, signal_sup: f64) -> Result<Self> {
        Self::new(alpha, signal_sup.max(0.0) + 1.0, signal_sup)
    }

    pub fn resolve(alpha: f64, c: Option<f64>, signal_sup: f64) -> Result<Self> {
        match c {
            Some(c) => Self::new(alpha, c, signal_sup),
            None => Self::auto(alpha, signal_sup),
        }
    }

    fn sigma(&self, x: f64) -> f64 {
        ActivationKind::ParametricRelu { alpha: self.alpha }.apply(x)
    }

    /// Gadget output for a scalar signal, evaluated through the two PReLU neurons.
    pub fn evaluate(&self, s: f64) -> f64 {
        (self.sigma(s) - self.sigma(s - self.c) - self.alpha * self.c) / (1.0 - self.alpha)
    }

    /// Adds the neuron pair for `signal = row . h + bias` and routes `out_coef * a(signal)` to
    /// the output.
    fn wire(&self, g: &mut GadgetRows, row: Vec<f64>, bias: f64, out_coef: f64) {
        let k = out_coef / (1.0 - self.alpha);
        g.rows.push(row.clone());
        g.bias.push(bias);
        g.rows.push(row);
        g.bias.push(bias - self.c);
        g.out.push(k);
        g.out.push(-k);
        g.out_bias -= k * self.alpha * self.c;
    }
}

fn finish(
    basis: Basis,
    g: GadgetRows,
    alpha: f64,
    d: usize,
    meta: NetMetadata,
) -> Result<Mlp> {
    let act = ActivationKind::ParametricRelu { alpha };
    let second = DenseLayer::new(
        Matrix::from_rows(g.rows).expect("rows share the basis width"),
        g.bias,
        act,
    );
    let out = DenseLayer::new(
        Matrix::from_rows(vec![g.out]).expect("one row"),
        vec![g.out_bias],
        ActivationKind::Identity,
    );
    Ok(Mlp::new(d, vec![basis.layer, second, out])?.with_metadata(meta))
}

fn classifier_prelu(params: &ClassifierParams, alpha: f64, c: Option<f64>) -> Result<Mlp> {
    params.validate()?;
    if params.cost != CostVariant::PlusMinusOne {
        return Err(Error::param("parametric relu classifiers only support the +/-1 outputs"));
    }
    let d = params.d;
    let df = d as f64;
    let ramp = ClippedRamp::resolve(alpha, c, df - params.b1.min(params.b2))?;
    let layout = HatLayout::uniform(grid_1d(params.n)?, HatMode::Disjoint)?;
    let basis = prelu_hat_first_layer(&layout, d, alpha)?;
    let mut g = GadgetRows::default();
    ramp.wire(&mut g, halfspace_sums(&basis, d, true), -params.b1, 1.0 / (df - params.b1));
    ramp.wire(&mut g, halfspace_sums(&basis, d, false), -params.b2, -1.0 / (df - params.b2));
    let family = if d == 1 { "prelu-classifier-1d" } else { "prelu-classifier-nd" };
    let h = params.half_width();
    let meta = NetMetadata::new(family)
        .param("n", params.n)
        .param("d", d)
        .param("b1", params.b1)
        .param("b2", params.b2)
        .param("h", h)
        .param("alpha", alpha)
        .param("c", ramp.c)
        .param(
            "layout",
            "second layer: (I1, I1 - c, I2, I2 - c); c = bias difference within each pair",
        )
        .output_bound(1.0)
        .dead_zone_radius((df - params.b()) * h);
    finish(basis, g, alpha, d, meta)
}

/// 1D classifier with `H1 = 2N + 1`, `H2 = 4` (two ramp pairs).
pub fn classifier_1d_prelu(params: &ClassifierParams, alpha: f64, c: Option<f64>) -> Result<Mlp> {
    if params.d != 1 {
        return Err(Error::param("classifier_1d_prelu needs d = 1"));
    }
    classifier_prelu(params, alpha, c)
}

/// d-D classifier with `H1 = d(2N + 1)`, `H2 = 4`.
pub fn classifier_nd_prelu(params: &ClassifierParams, alpha: f64, c: Option<f64>) -> Result<Mlp> {
    if params.d < 2 {
        return Err(Error::param("classifier_nd_prelu needs d >= 2"));
    }
    classifier_prelu(params, alpha, c)
}

fn approximator_prelu(
    data: &TrainingSet,
    b: f64,
    alpha: f64,
    c: Option<f64>,
    width_budget: u128,
    family: &str,
) -> Result<Mlp> {
    let (n, d) = grid_shape(data)?;
    check_b(b, d, "b")?;
    let df = d as f64;
    let ramp = ClippedRamp::resolve(alpha, c, df - b)?;
    let width = 2 * data.len() as u128;
    if width > width_budget {
        return Err(Error::Budget {
            what: "second hidden layer (2 N^d neurons)".into(),
            required: width,
            budget: width_budget,
        });
    }
    let layout = HatLayout::uniform(grid_1d(n)?, HatMode::Overlapping)?;
    let basis = prelu_hat_first_layer(&layout, d, alpha)?;
    let mut g = GadgetRows::default();
    for (idx, y) in multi_indices(n, d).zip(data.targets()) {
        ramp.wire(&mut g, tensor_row(&basis, &idx), -b, y / (df - b));
    }
    let h = layout.half_width;
    let meta = NetMetadata::new(family)
        .param("n", n)
        .param("d", d)
        .param("b", b)
        .param("h", h)
        .param("alpha", alpha)
        .param("c", ramp.c)
        .param("layout", "second layer: pairs (Phi_k - b, Phi_k - b - c) in grid order")
        .output_bound(2f64.powi(d as i32) * max_abs(data.targets()))
        .dead_zone_radius((df - b) * h);
    finish(basis, g, alpha, d, meta)
}

/// 1D approximator with `H1 = N + 2`, `H2 = 2N`.
pub fn approximator_1d_prelu(data: &TrainingSet, b: f64, alpha: f64, c: Option<f64>) -> Result<Mlp> {
    if data.dim() != 1 {
        return Err(Error::param("approximator_1d_prelu needs 1D data"));
    }
    approximator_prelu(data, b, alpha, c, DEFAULT_WIDTH_BUDGET, "prelu-approx-1d")
}

/// d-D approximator with `H1 = d(N + 2)`, `H2 = 2 N^d`.
pub fn approximator_nd_prelu(data: &TrainingSet, b: f64, alpha: f64, c: Option<f64>) -> Result<Mlp> {
    approximator_nd_prelu_with_budget(data, b, alpha, c, DEFAULT_WIDTH_BUDGET)
}

pub fn approximator_nd_prelu_with_budget(
    data: &TrainingSet,
    b: f64,
    alpha: f64,
    c: Option<f64>,
    width_budget: u128,
) -> Result<Mlp> {
    if data.dim() < 2 {
        return Err(Error::param("approximator_nd_prelu needs d >= 2"));
    }
    approximator_prelu(data, b, alpha, c, width_budget, "prelu-approx-nd")
}
