//! Depth extension: append hidden layers to a network, carrying its output through one
//! neuron per layer with `p_1 = eps f + c`, `p_n = (a(p_{n-1}) - a(c)) / a'(c) + c` and
//! output `(a(p_M) - a(c)) / (a'(c) eps)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::{ActivationKind, DenseLayer, Matrix, Mlp};
use crate::verify::rng::par_max;

/// How the carrier recurrence is parameterised.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum ExtensionMode {
    /// ReLU carrier kept on its linear piece; `c` defaults to `1 + bound`.
    ReluExact { c: Option<f64> },
    /// Any activation with `a'(c) != 0`; the output moves by `O(eps)`.
    SmoothFirstOrder { eps: f64, c: f64 },
    /// Parametric-ReLU carrier shifted by `shift > bound`; defaults to `1 + bound`.
    PreluShift { shift: Option<f64> },
}

impl ExtensionMode {
    pub const DEFAULT_EPS: f64 = 0.01;

    pub fn name(&self) -> &'static str {
        match self {
            ExtensionMode::ReluExact { .. } => "relu-exact",
            ExtensionMode::SmoothFirstOrder { .. } => "smooth",
            ExtensionMode::PreluShift { .. } => "prelu-shift",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionParams {
    /// Number of appended hidden layers.
    pub layers: usize,
    /// Width of each appended layer; empty means width 1 everywhere.
    #[serde(default)]
    pub widths: Vec<usize>,
    pub mode: ExtensionMode,
    /// Activation of the appended layers.
    pub activation: ActivationKind,
    /// Overrides the `sup |f|` bound stored in the network metadata.
    #[serde(default)]
    pub output_bound: Option<f64>,
}

impl ExtensionParams {
    pub fn relu_exact(layers: usize) -> Self {
        ExtensionParams {
            layers,
            widths: Vec::new(),
            mode: ExtensionMode::ReluExact { c: None },
            activation: ActivationKind::Relu,
            output_bound: None,
        }
    }

    pub fn prelu_shift(layers: usize, alpha: f64) -> Self {
        ExtensionParams {
            layers,
            widths: Vec::new(),
            mode: ExtensionMode::PreluShift { shift: None },
            activation: ActivationKind::ParametricRelu { alpha },
            output_bound: None,
        }
    }

    /// Sigmoid carrier at `c = 0`: `p_n = 4 sigma(p_{n-1}) - 2`, output `(4 sigma(p_M) - 2) / eps`.
    pub fn sigmoid(layers: usize, eps: f64) -> Self {
        ExtensionParams {
            layers,
            widths: Vec::new(),
            mode: ExtensionMode::SmoothFirstOrder { eps, c: 0.0 },
            activation: ActivationKind::Sigmoid,
            output_bound: None,
        }
    }

    pub fn with_widths(mut self, widths: Vec<usize>) -> Self {
        self.widths = widths;
        self
    }

    pub fn with_c(mut self, value: f64) -> Self {
        self.mode = match self.mode {
            ExtensionMode::ReluExact { .. } => ExtensionMode::ReluExact { c: Some(value) },
            ExtensionMode::SmoothFirstOrder { eps, .. } => ExtensionMode::SmoothFirstOrder { eps, c: value },
            ExtensionMode::PreluShift { .. } => ExtensionMode::PreluShift { shift: Some(value) },
        };
        self
    }

    pub fn with_output_bound(mut self, bound: f64) -> Self {
        self.output_bound = Some(bound);
        self
    }

    fn widths(&self) -> Result<Vec<usize>> {
        if self.layers == 0 {
            return Err(Error::param("depth extension needs at least one appended layer"));
        }
        if self.widths.is_empty() {
            return Ok(vec![1; self.layers]);
        }
        if self.widths.len() != self.layers {
            return Err(Error::param(format!(
                "{} widths given for {} appended layers",
                self.widths.len(),
                self.layers
            )));
        }
        if self.widths.contains(&0) {
            return Err(Error::param("appended layer widths must be at least 1"));
        }
        Ok(self.widths.clone())
    }
}

/// Audit entry stored in the metadata of an extended network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionRecord {
    pub mode: String,
    pub activation: ActivationKind,
    pub eps: f64,
    pub c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<f64>,
    /// Hidden-layer indices (0-based) of the appended layers.
    pub carrier_layers: Vec<usize>,
    /// Position of the carrier inside every appended layer.
    pub carrier_neuron: usize,
}

fn bound_of(net: &Mlp, params: &ExtensionParams) -> Result<f64> {
    params
        .output_bound
        .or_else(|| net.metadata().and_then(|m| m.output_bound))
        .ok_or_else(|| {
            Error::param("no output bound in the network metadata; pass one or give c explicitly")
        })
}

/// Resolves `(eps, c)` and checks the mode's preconditions.
fn resolve(net: &Mlp, params: &ExtensionParams) -> Result<(f64, f64)> {
    let act = params.activation;
    match params.mode {
        ExtensionMode::ReluExact { c } => {
            if act != ActivationKind::Relu {
                return Err(Error::param(format!("relu-exact needs relu layers, got {}", act.name())));
            }
            let c = match c {
                Some(c) => {
                    if let Ok(bound) = bound_of(net, params) {
                        if c <= bound {
                            return Err(Error::param(format!(
                                "c = {c} must exceed the output bound {bound} so that p_1 > 0"
                            )));
                        }
                    }
                    c
                }
                None => 1.0 + bound_of(net, params)?,
            };
            Ok((1.0, c))
        }
        ExtensionMode::PreluShift { shift } => {
            if !matches!(act, ActivationKind::ParametricRelu { alpha } if alpha != 1.0 && alpha.is_finite()) {
                return Err(Error::param(format!(
                    "prelu-shift needs parametric relu layers with alpha != 1, got {}",
                    act.name()
                )));
            }
            let bound = bound_of(net, params);
            let shift = match (shift, bound) {
                (Some(s), Ok(b)) if s <= b => {
                    return Err(Error::param(format!("shift {s} must exceed the output bound {b}")));
                }
                (Some(s), _) => s,
                (None, b) => 1.0 + b?,
            };
            Ok((1.0, shift))
        }
        ExtensionMode::SmoothFirstOrder { eps, c } => {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::param(format!("eps must be positive, got {eps}")));
            }
            if !c.is_finite() {
                return Err(Error::param(format!("c must be finite, got {c}")));
            }
            Ok((eps, c))
        }
    }
}

/// Appends `params.layers` hidden layers. Neuron 0 of each appended layer is the carrier;
/// the others have zero incoming weights, zero bias and zero outgoing weights.
pub fn extend(net: &Mlp, params: &ExtensionParams) -> Result<Mlp> {
    let widths = params.widths()?;
    let (eps, c) = resolve(net, params)?;
    let act = params.activation;
    let (ac, slope) = act.value_and_slope(c);
    if slope == 0.0 || !slope.is_finite() {
        return Err(Error::param(format!(
            "{} has derivative {slope} at c = {c}; the carrier needs a'(c) != 0",
            act.name()
        )));
    }
    let pass_bias = c - ac / slope;

    let original_hidden = net.hidden_count();
    let mut layers = net.layers().to_vec();
    let out = layers.pop().expect("validated nets have an output layer");

    let mut first = Matrix::zeros(widths[0], out.in_width());
    for (dst, w) in first.row_mut(0).iter_mut().zip(out.weights.row(0)) {
        *dst = eps * w;
    }
    let mut bias = vec![0.0; widths[0]];
    bias[0] = eps * out.bias[0] + c;
    layers.push(DenseLayer::new(first, bias, act));

    for pair in widths.windows(2) {
        let mut w = Matrix::zeros(pair[1], pair[0]);
        w.set(0, 0, 1.0 / slope);
        let mut bias = vec![0.0; pair[1]];
        bias[0] = pass_bias;
        layers.push(DenseLayer::new(w, bias, act));
    }

    let last = *widths.last().expect("at least one layer");
    let mut w = Matrix::zeros(1, last);
    w.set(0, 0, 1.0 / (slope * eps));
    layers.push(DenseLayer::new(w, vec![-ac / (slope * eps)], ActivationKind::Identity));

    let mut extended = Mlp::new(net.input_dim(), layers)?;
    if let Some(mut meta) = net.metadata().cloned() {
        meta.extensions.push(ExtensionRecord {
            mode: params.mode.name().to_string(),
            activation: act,
            eps,
            c,
            shift: matches!(params.mode, ExtensionMode::PreluShift { .. }).then_some(c),
            carrier_layers: (original_hidden..original_hidden + widths.len()).collect(),
            carrier_neuron: 0,
        });
        extended = extended.with_metadata(meta);
    }
    Ok(extended)
}

/// Largest observed `|extended(x) - original(x)|` and where it happened.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionError {
    pub max: f64,
    pub argmax: Vec<f64>,
    pub samples: u64,
    pub seed: u64,
}

/// Sup-norm estimate over `samples` uniform points of `[0,1]^d`.
pub fn measure_extension_error(
    original: &Mlp,
    extended: &Mlp,
    samples: u64,
    seed: u64,
) -> Result<ExtensionError> {
    if original.input_dim() != extended.input_dim() {
        return Err(Error::structural(format!(
            "input dimensions differ: {} vs {}",
            original.input_dim(),
            extended.input_dim()
        )));
    }
    if samples == 0 {
        return Err(Error::param("need at least one sample"));
    }
    let (max, _, argmax) = par_max(original.input_dim(), samples, seed, |x| {
        (extended.forward_unchecked(x) - original.forward_unchecked(x)).abs()
    })
    .expect("samples > 0");
    Ok(ExtensionError { max, argmax, samples, seed })
}

/// Errors at or below this are treated as exact reproduction.
pub const EXACT_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConvergenceOrder {
    /// Some error was at or below [`EXACT_THRESHOLD`]; no fit.
    Exact { errors: Vec<(f64, f64)> },
    /// Least-squares slope of `log(error)` against `log(eps)`.
    Fitted { slope: f64, errors: Vec<(f64, f64)> },
}

impl ConvergenceOrder {
    pub fn slope(&self) -> Option<f64> {
        match self {
            ConvergenceOrder::Fitted { slope, .. } => Some(*slope),
            ConvergenceOrder::Exact { .. } => None,
        }
    }

    pub fn errors(&self) -> &[(f64, f64)] {
        match self {
            ConvergenceOrder::Exact { errors } | ConvergenceOrder::Fitted { errors, .. } => errors,
        }
    }
}

fn check_geometric(eps: &[f64]) -> Result<()> {
    if eps.len() < 3 {
        return Err(Error::param(format!("need at least 3 eps values, got {}", eps.len())));
    }
    if eps.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return Err(Error::param("eps values must be positive and finite"));
    }
    let ratio = eps[1] / eps[0];
    for w in eps.windows(2) {
        if ((w[1] / w[0]) / ratio - 1.0).abs() > 1e-9 {
            return Err(Error::param("eps values must form a geometric sequence"));
        }
    }
    if (ratio - 1.0).abs() < 1e-12 {
        return Err(Error::param("eps values must be distinct"));
    }
    Ok(())
}

/// Fits the order of `|build(eps) - original|` in `eps`.
pub fn convergence_order<B>(
    original: &Mlp,
    build: B,
    eps: &[f64],
    samples: u64,
    seed: u64,
) -> Result<ConvergenceOrder>
where
    B: Fn(f64) -> Result<Mlp>,
{
    check_geometric(eps)?;
    let mut errors = Vec::with_capacity(eps.len());
    for &e in eps {
        let ext = build(e)?;
        errors.push((e, measure_extension_error(original, &ext, samples, seed)?.max));
    }
    if errors.iter().any(|&(_, err)| err <= EXACT_THRESHOLD) {
        return Ok(ConvergenceOrder::Exact { errors });
    }
    let pts: Vec<(f64, f64)> = errors.iter().map(|&(e, err)| (e.ln(), err.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(ConvergenceOrder::Fitted { slope: sxy / sxx, errors })
}
