//! ReLU constructions: 1D/d-D classifiers and approximators whose training loss is zero
//! while the output vanishes away from the grid.

use serde::{Deserialize, Serialize};

use super::basis::{hat_first_layer, Basis, HatLayout, HatMode};
use super::check::{check_b, grid_shape, max_abs, DEFAULT_WIDTH_BUDGET};
use crate::error::{Error, Result};
use crate::grid::{grid_1d, ImageGridSpec, TrainingSet, PIXEL_CLASS_THRESHOLD};
use crate::metadata::NetMetadata;
use crate::net::{ActivationKind, DenseLayer, Matrix, Mlp};

/// Output convention of a binary classifier.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostVariant {
    /// Outputs `-1` / `+1` on the grid, for MAE and MSE.
    #[default]
    PlusMinusOne,
    /// Outputs `0` / `1` on the grid and `1/2` off it, for cross-entropy.
    CrossEntropy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifierParams {
    pub n: usize,
    pub d: usize,
    pub b1: f64,
    pub b2: f64,
    pub cost: CostVariant,
}

impl ClassifierParams {
    pub fn one_d(n: usize, b: f64) -> Self {
        ClassifierParams {
            n,
            d: 1,
            b1: b,
            b2: b,
            cost: CostVariant::PlusMinusOne,
        }
    }

    pub fn nd(d: usize, n: usize, b: f64) -> Self {
        ClassifierParams {
            n,
            d,
            b1: b,
            b2: b,
            cost: CostVariant::PlusMinusOne,
        }
    }

    pub fn with_biases(mut self, b1: f64, b2: f64) -> Self {
        self.b1 = b1;
        self.b2 = b2;
        self
    }

    pub fn with_cost(mut self, cost: CostVariant) -> Self {
        self.cost = cost;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::param(format!("N must be at least 2, got {}", self.n)));
        }
        if self.d == 0 {
            return Err(Error::param("dimension must be at least 1"));
        }
        check_b(self.b1, self.d, "b1")?;
        check_b(self.b2, self.d, "b2")?;
        if self.d > 1 && self.b1 != self.b2 {
            return Err(Error::param(format!(
                "distinct biases are only supported in 1D (got b1={}, b2={})",
                self.b1, self.b2
            )));
        }
        if self.d > 1 && self.cost == CostVariant::CrossEntropy {
            return Err(Error::param("the cross-entropy variant is only defined in 1D"));
        }
        Ok(())
    }

    /// Smaller of the two biases; its wider spike sets the dead-zone radius.
    pub fn b(&self) -> f64 {
        self.b1.min(self.b2)
    }

    /// Hat half-width `1 / (2(N-1))`.
    pub fn half_width(&self) -> f64 {
        0.5 / (self.n - 1) as f64
    }
}

/// Second-layer rows `I_1` (first coordinate >= 0.5) and `I_2` (< 0.5) over a hat basis.
/// Every hat of the remaining dimensions enters both sums.
pub(crate) fn halfspace_sums(basis: &Basis, d: usize, upper: bool) -> Vec<f64> {
    let mut row = vec![0.0; basis.width()];
    for term in &basis.terms {
        let take = term.dim > 0 || ((term.center >= 0.5) == upper);
        if take {
            basis.accumulate(&mut row, term.dim, term.center_index, 1.0);
        }
    }
    debug_assert!(d >= 1);
    row
}

fn classifier_impl(params: &ClassifierParams, shared: bool) -> Result<Mlp> {
    params.validate()?;
    let d = params.d;
    let mut layout = HatLayout::uniform(grid_1d(params.n)?, HatMode::Disjoint)?;
    layout.shared = shared;
    let basis = hat_first_layer(&layout, d, ActivationKind::Relu)?;

    let mut second = Matrix::zeros(2, basis.width());
    second
        .row_mut(0)
        .copy_from_slice(&halfspace_sums(&basis, d, true));
    second
        .row_mut(1)
        .copy_from_slice(&halfspace_sums(&basis, d, false));
    let second = DenseLayer::new(second, vec![-params.b1, -params.b2], ActivationKind::Relu);

    let df = d as f64;
    let (w, out_bias) = match params.cost {
        CostVariant::PlusMinusOne => (
            vec![1.0 / (df - params.b1), -1.0 / (df - params.b2)],
            0.0,
        ),
        CostVariant::CrossEntropy => (
            vec![0.5 / (df - params.b1), -0.5 / (df - params.b2)],
            0.5,
        ),
    };
    let out = DenseLayer::new(
        Matrix::from_rows(vec![w]).expect("one row"),
        vec![out_bias],
        ActivationKind::Identity,
    );

    let family = if d == 1 { "relu-classifier-1d" } else { "relu-classifier-nd" };
    let h = params.half_width();
    let meta = NetMetadata::new(family)
        .param("n", params.n)
        .param("d", d)
        .param("b1", params.b1)
        .param("b2", params.b2)
        .param("h", h)
        .param("shared_knots", shared)
        .param(
            "cost",
            serde_json::to_value(params.cost).expect("serializable"),
        )
        .output_bound(1.0)
        .dead_zone_radius((df - params.b()) * h);
    Ok(Mlp::new(d, vec![basis.layer, second, out])?.with_metadata(meta))
}

/// 1D binary classifier: `H1 = 2N + 1`, `H2 = 2`; exact labels on the grid, zero output
/// whenever the distance to the grid is at least `(1 - b) h`.
pub fn classifier_1d(params: &ClassifierParams) -> Result<Mlp> {
    if params.d != 1 {
        return Err(Error::param(format!("classifier_1d needs d = 1, got {}", params.d)));
    }
    classifier_impl(params, true)
}

/// d-dimensional halfspace classifier: `H1 = d(2N + 1)`, `H2 = 2`, `b in [d-1, d)`.
pub fn classifier_nd(params: &ClassifierParams) -> Result<Mlp> {
    if params.d < 2 {
        return Err(Error::param(format!("classifier_nd needs d >= 2, got {}", params.d)));
    }
    classifier_impl(params, true)
}

/// Same function as the classifiers above but with three private neurons per hat.
pub fn classifier_unshared(params: &ClassifierParams) -> Result<Mlp> {
    classifier_impl(params, false)
}

/// Second-layer row selecting the tensor basis `sum_j phi_{j, idx_j}`.
pub(crate) fn tensor_row(basis: &Basis, multi_index: &[usize]) -> Vec<f64> {
    let mut row = vec![0.0; basis.width()];
    for (j, &i) in multi_index.iter().enumerate() {
        basis.accumulate(&mut row, j, i, 1.0);
    }
    row
}

/// Row-major multi-indices `(i_1, .., i_d)` in `0..n`, last index fastest.
pub(crate) fn multi_indices(n: usize, d: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(d as u32);
    (0..total).map(move |mut flat| {
        let mut idx = vec![0; d];
        for slot in idx.iter_mut().rev() {
            *slot = flat % n;
            flat /= n;
        }
        idx
    })
}

fn approximator_impl(data: &TrainingSet, b: f64, width_budget: u128, family: &str) -> Result<Mlp> {
    let (n, d) = grid_shape(data)?;
    check_b(b, d, "b")?;
    let width = data.len() as u128;
    if width > width_budget {
        return Err(Error::Budget {
            what: "second hidden layer (N^d neurons)".into(),
            required: width,
            budget: width_budget,
        });
    }
    let layout = HatLayout::uniform(grid_1d(n)?, HatMode::Overlapping)?;
    let basis = hat_first_layer(&layout, d, ActivationKind::Relu)?;
    let mut second = Matrix::zeros(data.len(), basis.width());
    for (k, idx) in multi_indices(n, d).enumerate() {
        second.row_mut(k).copy_from_slice(&tensor_row(&basis, &idx));
    }
    let second = DenseLayer::new(second, vec![-b; data.len()], ActivationKind::Relu);
    let df = d as f64;
    let w: Vec<f64> = data.targets().iter().map(|y| y / (df - b)).collect();
    let out = DenseLayer::new(
        Matrix::from_rows(vec![w]).expect("one row"),
        vec![0.0],
        ActivationKind::Identity,
    );
    let h = layout.half_width;
    let meta = NetMetadata::new(family)
        .param("n", n)
        .param("d", d)
        .param("b", b)
        .param("h", h)
        .output_bound(2f64.powi(d as i32) * max_abs(data.targets()))
        .dead_zone_radius((df - b) * h);
    Ok(Mlp::new(d, vec![basis.layer, second, out])?.with_metadata(meta))
}

/// 1D approximator `sum_i y_i a(phi_i - b) / (1 - b)` with overlapping hats:
/// `H1 = N + 2`, `H2 = N`.
pub fn approximator_1d(data: &TrainingSet, b: f64) -> Result<Mlp> {
    if data.dim() != 1 {
        return Err(Error::param(format!("approximator_1d needs 1D data, got d = {}", data.dim())));
    }
    approximator_impl(data, b, DEFAULT_WIDTH_BUDGET, "relu-approx-1d")
}

/// d-D approximator over the tensor basis `Phi = sum_j phi_j`: `H1 = d(N + 2)`, `H2 = N^d`.
pub fn approximator_nd(data: &TrainingSet, b: f64) -> Result<Mlp> {
    approximator_nd_with_budget(data, b, DEFAULT_WIDTH_BUDGET)
}

pub fn approximator_nd_with_budget(data: &TrainingSet, b: f64, width_budget: u128) -> Result<Mlp> {
    if data.dim() < 2 {
        return Err(Error::param("approximator_nd needs d >= 2"));
    }
    approximator_impl(data, b, width_budget, "relu-approx-nd")
}

/// Image classifier over `P` pixels: `H1 = P(2N + 1)`, `H2 = 2`, `b in [P-1, P)`.
/// The dark-sum neuron carries the `-1` output coefficient so dark images map to `-1`.
pub fn image_classifier(spec: &ImageGridSpec, b: f64) -> Result<Mlp> {
    let p = spec.pixels;
    check_b(b, p, "b")?;
    let meta_grid = spec.meta();
    let layout = HatLayout::uniform(meta_grid.axis.clone(), HatMode::Disjoint)?;
    let basis = hat_first_layer(&layout, p, ActivationKind::Relu)?;
    let raw = spec.raw_values();
    let mut second = Matrix::zeros(2, basis.width());
    for term in &basis.terms {
        let dark = raw[term.center_index] < PIXEL_CLASS_THRESHOLD;
        let r = if dark { 0 } else { 1 };
        basis.accumulate(second.row_mut(r), term.dim, term.center_index, 1.0);
    }
    let second = DenseLayer::new(second, vec![-b, -b], ActivationKind::Relu);
    let pf = p as f64;
    let out = DenseLayer::new(
        Matrix::from_rows(vec![vec![-1.0 / (pf - b), 1.0 / (pf - b)]]).expect("one row"),
        vec![0.0],
        ActivationKind::Identity,
    );
    let h = layout.half_width;
    let meta = NetMetadata::new("relu-image-classifier")
        .param("pixels", p)
        .param("step", spec.step)
        .param("n", spec.n())
        .param("b", b)
        .param("h", h)
        .output_bound(1.0)
        .dead_zone_radius((pf - b) * h);
    Ok(Mlp::new(p, vec![basis.layer, second, out])?.with_metadata(meta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{halfspace_set, sample_function, GridSpec};
    use crate::net::{loss, LossKind};
    use std::f64::consts::PI;

    fn f(net: &Mlp, x: &[f64]) -> f64 {
        net.forward(x).unwrap()
    }

    #[test]
    fn classifier_1d_widths_and_labels() {
        let net = classifier_1d(&ClassifierParams::one_d(6, 0.0)).unwrap();
        assert_eq!(net.hidden_widths(), vec![13, 2]);
        assert!((f(&net, &[0.8]) - 1.0).abs() < 1e-12);
        assert!((f(&net, &[0.65]) - 0.5).abs() < 1e-12);
        assert_eq!(f(&net, &[0.5]), 0.0);
        assert!((f(&net, &[0.4]) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn classifier_1d_spike_edge() {
        let net = classifier_1d(&ClassifierParams::one_d(6, 0.9)).unwrap();
        assert!((f(&net, &[0.8]) - 1.0).abs() < 1e-12);
        assert!(f(&net, &[0.81]).abs() < 1e-9);
        let data = halfspace_set(GridSpec::new(1, 6).unwrap(), 100).unwrap();
        assert!(loss(&net, &data, LossKind::Mse).unwrap() <= 1e-12);
    }

    #[test]
    fn cross_entropy_variant() {
        let p = ClassifierParams::one_d(6, 0.95).with_cost(CostVariant::CrossEntropy);
        let net = classifier_1d(&p).unwrap();
        assert!(f(&net, &[0.2]).abs() < 1e-12);
        assert!((f(&net, &[0.6]) - 1.0).abs() < 1e-12);
        assert!((f(&net, &[0.48]) - 0.5).abs() < 1e-12);
        assert!((f(&net, &[0.52]) - 0.5).abs() < 1e-12);
        let data = halfspace_set(GridSpec::new(1, 6).unwrap(), 100).unwrap();
        assert!(loss(&net, &data, LossKind::CrossEntropy).unwrap() < 1e-12);
    }

    #[test]
    fn b_range_enforced() {
        assert!(matches!(
            classifier_1d(&ClassifierParams::one_d(6, 1.0)),
            Err(Error::Parameter(_))
        ));
        assert!(classifier_1d(&ClassifierParams::one_d(6, -0.1)).is_err());
        assert!(classifier_nd(&ClassifierParams::nd(2, 4, 0.5)).is_err());
        assert!(classifier_nd(&ClassifierParams::nd(2, 4, 2.0)).is_err());
        assert!(classifier_nd(&ClassifierParams::nd(2, 4, 1.0)).is_ok());
        assert!(classifier_nd(&ClassifierParams::nd(2, 4, 1.5).with_biases(1.5, 1.6)).is_err());
    }

    #[test]
    fn classifier_nd_widths() {
        let net = classifier_nd(&ClassifierParams::nd(2, 50, 1.5)).unwrap();
        assert_eq!(net.hidden_widths(), vec![202, 2]);
        let net = classifier_nd(&ClassifierParams::nd(3, 4, 2.7)).unwrap();
        assert_eq!(net.hidden_widths(), vec![27, 2]);
    }

    #[test]
    fn classifier_nd_labels_and_dead_zone() {
        let p = ClassifierParams::nd(3, 4, 2.7);
        let net = classifier_nd(&p).unwrap();
        let data = halfspace_set(GridSpec::new(3, 4).unwrap(), 1000).unwrap();
        for (x, y) in data.points().iter().zip(data.targets()) {
            assert!((f(&net, x) - y).abs() < 1e-9);
        }
        let h = p.half_width();
        // just beyond 0.3 h in one coordinate from a grid point
        let x = [1.0 / 3.0 + 0.31 * h, 2.0 / 3.0, 0.0];
        assert!(f(&net, &x).abs() < 1e-12);
    }

    #[test]
    fn approximator_1d_interpolates_at_b0() {
        let data = sample_function(|x| (PI * x[0]).sin(), GridSpec::new(1, 9).unwrap(), 100).unwrap();
        let net = approximator_1d(&data, 0.0).unwrap();
        assert_eq!(net.hidden_widths(), vec![11, 9]);
        for s in 0..=800 {
            let x = s as f64 / 800.0;
            let i = ((x * 8.0).floor() as usize).min(7);
            let t = x * 8.0 - i as f64;
            let lin = (1.0 - t) * data.targets()[i] + t * data.targets()[i + 1];
            assert!((f(&net, &[x]) - lin).abs() < 1e-12);
        }
        let spiky = approximator_1d(&data, 0.99).unwrap();
        for i in 0..8 {
            assert!(f(&spiky, &[(i as f64 + 0.5) / 8.0]).abs() < 1e-12);
        }
    }

    #[test]
    fn approximator_rejects_non_grid() {
        let data = TrainingSet::new(1, vec![vec![0.0], vec![0.3], vec![1.0]], vec![0.0; 3], None).unwrap();
        assert!(matches!(approximator_1d(&data, 0.0), Err(Error::Parameter(_))));
    }

    #[test]
    fn approximator_nd_cases() {
        let data = sample_function(|x| x[0] * x[1], GridSpec::new(2, 3).unwrap(), 100).unwrap();
        let net = approximator_nd(&data, 1.0).unwrap();
        assert_eq!(net.hidden_widths(), vec![10, 9]);
        for (x, y) in data.points().iter().zip(data.targets()) {
            assert!((f(&net, x) - y).abs() < 1e-12);
        }
        let spiky = approximator_nd(&data, 1.99).unwrap();
        for c in [[0.25, 0.25], [0.25, 0.75], [0.75, 0.25], [0.75, 0.75]] {
            assert!(f(&spiky, &c).abs() < 1e-12);
        }
        let constant = sample_function(|_| 2.5, GridSpec::new(2, 4).unwrap(), 100).unwrap();
        let net = approximator_nd(&constant, 1.3).unwrap();
        for x in constant.points() {
            assert!((f(&net, x) - 2.5).abs() < 1e-12);
        }
        assert!(matches!(
            approximator_nd_with_budget(&constant, 1.3, 10),
            Err(Error::Budget { required: 16, .. })
        ));
    }

    #[test]
    fn image_widths() {
        for (m, h1) in [(2, 2313), (5, 945), (10, 477)] {
            let net = image_classifier(&ImageGridSpec::new(9, m).unwrap(), 8.5).unwrap();
            assert_eq!(net.hidden_widths(), vec![h1, 2]);
        }
    }

    #[test]
    fn image_classifier_small() {
        let spec = ImageGridSpec::new(2, 64).unwrap();
        let net = image_classifier(&spec, 1.9).unwrap();
        let data = crate::grid::image_training_set(spec, 100).unwrap();
        for (x, y) in data.points().iter().zip(data.targets()) {
            assert!((f(&net, x) - y).abs() < 1e-9);
        }
        assert!((f(&net, &[0.0, 0.0]) + 1.0).abs() < 1e-12);
        let tight = image_classifier(&spec, 1.999).unwrap();
        assert_eq!(f(&tight, &[1.0 / 255.0, 1.0 / 255.0]), 0.0);
        // mixed image: one dark pixel, one light pixel
        assert!(f(&net, &[0.0, 128.0 / 255.0]).abs() < 1e-12);
    }
}
