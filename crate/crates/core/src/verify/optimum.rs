use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::TrainingSet;
use crate::net::{loss_with_residuals, LossKind, Mlp};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub loss: f64,
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { loss: 1e-12, residual: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub loss_kind: LossKind,
    pub loss: f64,
    pub max_residual: f64,
    pub worst_index: usize,
    pub worst_point: Vec<f64>,
    pub tolerances: Tolerances,
    pub pass: bool,
}

/// Loss and worst pointwise residual of `net` on `data`; passes when both are within
/// tolerance.
pub fn check_global_optimum(
    net: &Mlp,
    data: &TrainingSet,
    kind: LossKind,
    tolerances: Tolerances,
) -> Result<VerificationReport> {
    let (loss, residuals) = loss_with_residuals(net, data, kind)?;
    let (worst_index, max_residual) = residuals
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |best, (i, r)| if r > best.1 || r.is_nan() { (i, r) } else { best });
    Ok(VerificationReport {
        loss_kind: kind,
        loss,
        max_residual,
        worst_index,
        worst_point: data.points().get(worst_index).cloned().unwrap_or_default(),
        tolerances,
        pass: loss <= tolerances.loss && max_residual <= tolerances.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{classifier_1d, ClassifierParams};
    use crate::grid::{halfspace_set, sample_function, GridSpec};
    use crate::net::{ActivationKind, DenseLayer, Matrix};

    #[test]
    fn classifier_passes() {
        let net = classifier_1d(&ClassifierParams::one_d(6, 0.9)).unwrap();
        let data = halfspace_set(GridSpec::new(1, 6).unwrap(), 100).unwrap();
        let r = check_global_optimum(&net, &data, LossKind::Mse, Tolerances::default()).unwrap();
        assert!(r.pass && r.loss <= 1e-12);
    }

    #[test]
    fn zero_net_fails_on_sin() {
        let zero = Mlp::new(
            1,
            vec![
                DenseLayer::new(Matrix::zeros(1, 1), vec![0.0], ActivationKind::Relu),
                DenseLayer::new(Matrix::zeros(1, 1), vec![0.0], ActivationKind::Identity),
            ],
        )
        .unwrap();
        let data = sample_function(
            |x| (std::f64::consts::PI * x[0]).sin(),
            GridSpec::new(1, 9).unwrap(),
            100,
        )
        .unwrap();
        let r = check_global_optimum(&zero, &data, LossKind::Mae, Tolerances::default()).unwrap();
        assert!(!r.pass);
        assert!((r.max_residual - 1.0).abs() < 1e-15);
        assert_eq!(r.worst_point, vec![0.5]);
    }
}
