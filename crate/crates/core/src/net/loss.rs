use serde::{Deserialize, Serialize};

use super::mlp::Mlp;
use crate::error::{Error, Result};
use crate::grid::TrainingSet;

/// Cost function over a training set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    Mae,
    Mse,
    CrossEntropy,
}

/// Outputs this far outside `[0, 1]` are still accepted (and clamped) by cross-entropy.
pub const CROSS_ENTROPY_SLACK: f64 = 1e-12;

/// Cross-entropy target for a stored label: `-1 -> 0`, `0 -> 0`, `1 -> 1`.
pub fn cross_entropy_target(y: f64) -> Option<f64> {
    if y == -1.0 || y == 0.0 {
        Some(0.0)
    } else if y == 1.0 {
        Some(1.0)
    } else {
        None
    }
}

/// Per-point loss contribution and the residual `|target - f|` in the loss's own target space.
pub(crate) fn point_term(kind: LossKind, y: f64, f: f64, index: usize) -> Result<(f64, f64)> {
    match kind {
        LossKind::Mae => Ok(((y - f).abs(), (y - f).abs())),
        LossKind::Mse => Ok(((y - f) * (y - f), (y - f).abs())),
        LossKind::CrossEntropy => {
            let t = cross_entropy_target(y).ok_or_else(|| Error::Domain {
                index,
                message: format!("target {y} is not a class label"),
            })?;
            if !(-CROSS_ENTROPY_SLACK..=1.0 + CROSS_ENTROPY_SLACK).contains(&f) {
                return Err(Error::Domain {
                    index,
                    message: format!("output {f} is outside [0, 1]"),
                });
            }
            let p = f.clamp(0.0, 1.0);
            // 0 * log 0 is taken as 0
            let mut term = 0.0;
            if t > 0.0 {
                if p == 0.0 {
                    return Err(Error::Domain {
                        index,
                        message: "log(0) for a positive label".into(),
                    });
                }
                term -= t * p.ln();
            }
            if t < 1.0 {
                if p == 1.0 {
                    return Err(Error::Domain {
                        index,
                        message: "log(0) for a negative label".into(),
                    });
                }
                term -= (1.0 - t) * (1.0 - p).ln();
            }
            Ok((term, (t - p).abs()))
        }
    }
}

/// Mean loss of `net` over `data`.
pub fn loss(net: &Mlp, data: &TrainingSet, kind: LossKind) -> Result<f64> {
    Ok(loss_with_residuals(net, data, kind)?.0)
}

/// Mean loss together with every per-point residual, in data order.
pub fn loss_with_residuals(net: &Mlp, data: &TrainingSet, kind: LossKind) -> Result<(f64, Vec<f64>)> {
    if data.is_empty() {
        return Err(Error::Data("training set is empty".into()));
    }
    if data.dim() != net.input_dim() {
        return Err(Error::structural(format!(
            "training set has dimension {}, network expects {}",
            data.dim(),
            net.input_dim()
        )));
    }
    let mut sum = 0.0;
    let mut residuals = Vec::with_capacity(data.len());
    for (i, (x, &y)) in data.points().iter().zip(data.targets()).enumerate() {
        let f = net.forward_unchecked(x);
        let (term, r) = point_term(kind, y, f, i)?;
        sum += term;
        residuals.push(r);
    }
    Ok((sum / data.len() as f64, residuals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{ActivationKind, DenseLayer, Matrix};

    fn constant_net(v: f64) -> Mlp {
        Mlp::new(
            1,
            vec![
                DenseLayer::new(Matrix::zeros(1, 1), vec![0.0], ActivationKind::Relu),
                DenseLayer::new(Matrix::zeros(1, 1), vec![v], ActivationKind::Identity),
            ],
        )
        .unwrap()
    }

    fn set(targets: Vec<f64>) -> TrainingSet {
        let points = (0..targets.len()).map(|i| vec![i as f64 / targets.len().max(2) as f64]).collect();
        TrainingSet::new(1, points, targets, None).unwrap()
    }

    #[test]
    fn zero_net_zero_targets() {
        let d = set(vec![0.0; 5]);
        assert_eq!(loss(&constant_net(0.0), &d, LossKind::Mse).unwrap(), 0.0);
        assert_eq!(loss(&constant_net(0.0), &d, LossKind::Mae).unwrap(), 0.0);
    }

    #[test]
    fn cross_entropy_half() {
        let d = set(vec![1.0]);
        let l = loss(&constant_net(0.5), &d, LossKind::CrossEntropy).unwrap();
        assert!((l - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn cross_entropy_out_of_range_names_point() {
        let d = set(vec![1.0, -1.0, 1.0]);
        match loss(&constant_net(1.5), &d, LossKind::CrossEntropy) {
            Err(Error::Domain { index, .. }) => assert_eq!(index, 0),
            other => panic!("{other:?}"),
        }
        match loss(&constant_net(1.0), &d, LossKind::CrossEntropy) {
            Err(Error::Domain { index, .. }) => assert_eq!(index, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mse_and_mae_values() {
        let d = set(vec![1.0, -1.0]);
        let net = constant_net(0.5);
        assert!((loss(&net, &d, LossKind::Mse).unwrap() - (0.25 + 2.25) / 2.0).abs() < 1e-15);
        assert!((loss(&net, &d, LossKind::Mae).unwrap() - 1.0).abs() < 1e-15);
    }
}
