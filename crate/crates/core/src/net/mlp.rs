use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::activation::ActivationKind;
use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::metadata::NetMetadata;

/// One fully connected layer: `activation(W x + bias)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseLayer {
    /// `out_width x in_width`.
    pub weights: Matrix,
    pub bias: Vec<f64>,
    pub activation: ActivationKind,
}

impl DenseLayer {
    pub fn new(weights: Matrix, bias: Vec<f64>, activation: ActivationKind) -> Self {
        DenseLayer {
            weights,
            bias,
            activation,
        }
    }

    pub fn in_width(&self) -> usize {
        self.weights.cols()
    }

    pub fn out_width(&self) -> usize {
        self.weights.rows()
    }

    fn apply_into(&self, input: &[f64], pre: &mut Vec<f64>, post: &mut Vec<f64>) {
        self.weights.affine_into(input, &self.bias, pre);
        post.clear();
        post.extend(pre.iter().map(|&z| self.activation.apply(z)));
    }
}

/// A structural problem reported by [`validate_layers`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "finding", rename_all = "snake_case")]
pub enum Finding {
    ZeroInputDim,
    NoHiddenLayers,
    WidthMismatch {
        layer: usize,
        expected: usize,
        found: usize,
    },
    BiasLength {
        layer: usize,
        rows: usize,
        bias: usize,
    },
    NonFiniteWeight {
        layer: usize,
        row: usize,
        col: usize,
        value: f64,
    },
    NonFiniteBias {
        layer: usize,
        row: usize,
        value: f64,
    },
    InvalidAlpha {
        layer: usize,
        alpha: f64,
    },
    OutputWidth {
        found: usize,
    },
    OutputActivation {
        found: &'static str,
    },
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::ZeroInputDim => write!(f, "input dimension is 0"),
            Finding::NoHiddenLayers => write!(f, "network has no hidden layer"),
            Finding::WidthMismatch {
                layer,
                expected,
                found,
            } => write!(
                f,
                "layer {layer}: expects {found} inputs but the previous width is {expected}"
            ),
            Finding::BiasLength { layer, rows, bias } => {
                write!(f, "layer {layer}: {rows} weight rows but bias length {bias}")
            }
            Finding::NonFiniteWeight {
                layer,
                row,
                col,
                value,
            } => write!(f, "layer {layer}: weight[{row}][{col}] = {value}"),
            Finding::NonFiniteBias { layer, row, value } => {
                write!(f, "layer {layer}: bias[{row}] = {value}")
            }
            Finding::InvalidAlpha { layer, alpha } => {
                write!(f, "layer {layer}: parametric relu slope {alpha} (must differ from 1 and be finite)")
            }
            Finding::OutputWidth { found } => write!(f, "output layer has width {found}, expected 1"),
            Finding::OutputActivation { found } => {
                write!(f, "output layer uses {found}, expected identity")
            }
        }
    }
}

/// Structural checks on a layer stack. An empty result means the stack is a valid [`Mlp`].
pub fn validate_layers(input_dim: usize, layers: &[DenseLayer]) -> Vec<Finding> {
    let mut findings = Vec::new();
    if input_dim == 0 {
        findings.push(Finding::ZeroInputDim);
    }
    if layers.len() < 2 {
        findings.push(Finding::NoHiddenLayers);
    }
    let mut width = input_dim;
    for (li, layer) in layers.iter().enumerate() {
        if layer.in_width() != width {
            findings.push(Finding::WidthMismatch {
                layer: li,
                expected: width,
                found: layer.in_width(),
            });
        }
        if layer.bias.len() != layer.out_width() {
            findings.push(Finding::BiasLength {
                layer: li,
                rows: layer.out_width(),
                bias: layer.bias.len(),
            });
        }
        for r in 0..layer.out_width() {
            for (c, &w) in layer.weights.row(r).iter().enumerate() {
                if !w.is_finite() {
                    findings.push(Finding::NonFiniteWeight {
                        layer: li,
                        row: r,
                        col: c,
                        value: w,
                    });
                }
            }
        }
        for (r, &b) in layer.bias.iter().enumerate() {
            if !b.is_finite() {
                findings.push(Finding::NonFiniteBias {
                    layer: li,
                    row: r,
                    value: b,
                });
            }
        }
        if let ActivationKind::ParametricRelu { alpha } = layer.activation {
            if alpha == 1.0 || !alpha.is_finite() {
                findings.push(Finding::InvalidAlpha { layer: li, alpha });
            }
        }
        width = layer.out_width();
    }
    if let Some(last) = layers.last() {
        if last.out_width() != 1 {
            findings.push(Finding::OutputWidth {
                found: last.out_width(),
            });
        }
        if last.activation != ActivationKind::Identity {
            findings.push(Finding::OutputActivation {
                found: last.activation.name(),
            });
        }
    }
    findings
}

/// Pre- and post-activation values of one layer, as recorded by [`Mlp::forward_trace`].
#[derive(Debug, Clone, PartialEq)]
pub struct LayerTrace {
    pub pre: Vec<f64>,
    pub post: Vec<f64>,
}

/// Dense feedforward network with `K >= 1` hidden layers and one identity output neuron.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mlp {
    input_dim: usize,
    layers: Vec<DenseLayer>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metadata: Option<NetMetadata>,
}

#[derive(Deserialize)]
struct RawMlp {
    input_dim: usize,
    layers: Vec<DenseLayer>,
    #[serde(default)]
    metadata: Option<NetMetadata>,
}

impl Mlp {
    pub fn new(input_dim: usize, layers: Vec<DenseLayer>) -> Result<Self> {
        let findings = validate_layers(input_dim, &layers);
        if !findings.is_empty() {
            let msg = findings
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ");
            return Err(Error::structural(msg));
        }
        Ok(Mlp {
            input_dim,
            layers,
            metadata: None,
        })
    }

    pub fn with_metadata(mut self, metadata: NetMetadata) -> Self {
        self.metadata = Some(metadata);
        self
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn layers(&self) -> &[DenseLayer] {
        &self.layers
    }

    pub fn into_layers(self) -> Vec<DenseLayer> {
        self.layers
    }

    pub fn metadata(&self) -> Option<&NetMetadata> {
        self.metadata.as_ref()
    }

    pub fn metadata_mut(&mut self) -> &mut Option<NetMetadata> {
        &mut self.metadata
    }

    /// Hidden-layer count `K`.
    pub fn hidden_count(&self) -> usize {
        self.layers.len() - 1
    }

    /// Widths of the hidden layers, first to last.
    pub fn hidden_widths(&self) -> Vec<usize> {
        self.layers[..self.layers.len() - 1]
            .iter()
            .map(DenseLayer::out_width)
            .collect()
    }

    /// Findings for this (already valid) network; always empty for values built through `new`.
    pub fn validate(&self) -> Vec<Finding> {
        validate_layers(self.input_dim, &self.layers)
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim {
            return Err(Error::structural(format!(
                "input has {} coordinates, network expects {}",
                x.len(),
                self.input_dim
            )));
        }
        Ok(())
    }

    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        self.check_input(x)?;
        Ok(self.forward_unchecked(x))
    }

    /// Forward pass without the input-length check. Panics (in debug) on a wrong length.
    pub fn forward_unchecked(&self, x: &[f64]) -> f64 {
        let mut input = x.to_vec();
        let mut pre = Vec::new();
        let mut post = Vec::new();
        for layer in &self.layers {
            layer.apply_into(&input, &mut pre, &mut post);
            std::mem::swap(&mut input, &mut post);
        }
        input[0]
    }

    /// Forward pass recording every layer's pre- and post-activation vectors.
    pub fn forward_trace(&self, x: &[f64]) -> Result<Vec<LayerTrace>> {
        self.check_input(x)?;
        let mut traces: Vec<LayerTrace> = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let input = traces.last().map_or(x, |t| t.post.as_slice());
            let mut pre = Vec::new();
            let mut post = Vec::new();
            layer.apply_into(input, &mut pre, &mut post);
            traces.push(LayerTrace { pre, post });
        }
        Ok(traces)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: RawMlp = serde_json::from_str(s)?;
        let mut net = Mlp::new(raw.input_dim, raw.layers)?;
        net.metadata = raw.metadata;
        Ok(net)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let s = fs::read_to_string(path)?;
        Mlp::from_json(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_net() -> Mlp {
        let w = Matrix::from_rows(vec![vec![1.0]]).unwrap();
        Mlp::new(
            1,
            vec![
                DenseLayer::new(w.clone(), vec![0.0], ActivationKind::Identity),
                DenseLayer::new(w, vec![0.0], ActivationKind::Identity),
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_network() {
        assert_eq!(identity_net().forward(&[0.7]).unwrap(), 0.7);
    }

    #[test]
    fn wrong_input_length() {
        assert!(matches!(
            identity_net().forward(&[0.1, 0.2]),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn well_formed_has_no_findings() {
        assert!(identity_net().validate().is_empty());
    }

    #[test]
    fn mismatched_widths_named() {
        let layers = vec![
            DenseLayer::new(Matrix::zeros(3, 2), vec![0.0; 3], ActivationKind::Relu),
            DenseLayer::new(Matrix::zeros(1, 4), vec![0.0], ActivationKind::Identity),
        ];
        let f = validate_layers(2, &layers);
        assert_eq!(
            f,
            vec![Finding::WidthMismatch {
                layer: 1,
                expected: 3,
                found: 4
            }]
        );
        assert!(Mlp::new(2, layers).is_err());
    }

    #[test]
    fn nan_weight_reported_with_coordinates() {
        let mut w = Matrix::zeros(2, 1);
        w.set(1, 0, f64::NAN);
        let layers = vec![
            DenseLayer::new(w, vec![0.0; 2], ActivationKind::Relu),
            DenseLayer::new(Matrix::zeros(1, 2), vec![0.0], ActivationKind::Identity),
        ];
        let f = validate_layers(1, &layers);
        assert_eq!(f.len(), 1);
        assert!(matches!(
            f[0],
            Finding::NonFiniteWeight {
                layer: 0,
                row: 1,
                col: 0,
                ..
            }
        ));
    }

    #[test]
    fn output_layer_shape() {
        let layers = vec![
            DenseLayer::new(Matrix::zeros(2, 1), vec![0.0; 2], ActivationKind::Relu),
            DenseLayer::new(Matrix::zeros(2, 2), vec![0.0; 2], ActivationKind::Sigmoid),
        ];
        let f = validate_layers(1, &layers);
        assert!(f.contains(&Finding::OutputWidth { found: 2 }));
        assert!(f.contains(&Finding::OutputActivation { found: "sigmoid" }));
    }

    #[test]
    fn trace_ends_at_forward() {
        let layers = vec![
            DenseLayer::new(
                Matrix::from_rows(vec![vec![1.0, -2.0], vec![0.3, 0.7]]).unwrap(),
                vec![0.1, -0.2],
                ActivationKind::Sigmoid,
            ),
            DenseLayer::new(
                Matrix::from_rows(vec![vec![2.0, -1.0]]).unwrap(),
                vec![0.25],
                ActivationKind::Identity,
            ),
        ];
        let net = Mlp::new(2, layers).unwrap();
        let x = [0.4, 0.9];
        let trace = net.forward_trace(&x).unwrap();
        assert_eq!(trace.len(), 2);
        assert_eq!(trace[1].post[0].to_bits(), net.forward(&x).unwrap().to_bits());
    }

    #[test]
    fn json_rejects_alpha_one() {
        let s = r#"{"input_dim":1,"layers":[
            {"weights":[[1.0]],"bias":[0.0],"activation":{"kind":"parametric_relu","alpha":1.0}},
            {"weights":[[1.0]],"bias":[0.0],"activation":{"kind":"identity"}}]}"#;
        assert!(matches!(Mlp::from_json(s), Err(Error::Structural(_))));
    }
}
