use serde::{Deserialize, Serialize};

/// Elementwise nonlinearity of a dense layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActivationKind {
    Identity,
    Relu,
    /// `alpha * x` for `x < 0`, `x` otherwise. `alpha` must differ from 1.
    ParametricRelu { alpha: f64 },
    Sigmoid,
}

impl ActivationKind {
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            ActivationKind::Identity => x,
            ActivationKind::Relu => {
                if x < 0.0 {
                    0.0
                } else {
                    x
                }
            }
            ActivationKind::ParametricRelu { alpha } => {
                if x < 0.0 {
                    alpha * x
                } else {
                    x
                }
            }
            ActivationKind::Sigmoid => sigmoid(x),
        }
    }

    /// Value and first derivative at `x`, used by the depth-extension recurrence.
    ///
    /// Piecewise-linear kinds report the right derivative at the kink.
    pub fn value_and_slope(self, x: f64) -> (f64, f64) {
        match self {
            ActivationKind::Identity => (x, 1.0),
            ActivationKind::Relu => {
                if x < 0.0 {
                    (0.0, 0.0)
                } else {
                    (x, 1.0)
                }
            }
            ActivationKind::ParametricRelu { alpha } => {
                if x < 0.0 {
                    (alpha * x, alpha)
                } else {
                    (x, 1.0)
                }
            }
            ActivationKind::Sigmoid => {
                let s = sigmoid(x);
                (s, s * (1.0 - s))
            }
        }
    }

    /// Whether the activation is the identity on `[0, inf)`.
    pub fn is_relu_like(self) -> bool {
        matches!(
            self,
            ActivationKind::Relu | ActivationKind::ParametricRelu { .. } | ActivationKind::Identity
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            ActivationKind::Identity => "identity",
            ActivationKind::Relu => "relu",
            ActivationKind::ParametricRelu { .. } => "parametric_relu",
            ActivationKind::Sigmoid => "sigmoid",
        }
    }
}

/// Free-function form of [`ActivationKind::apply`].
#[inline]
pub fn activation_apply(kind: ActivationKind, x: f64) -> f64 {
    kind.apply(x)
}

/// Logistic function `1 / (1 + e^-x)`, evaluated without overflow for large `|x|`.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_points() {
        assert_eq!(ActivationKind::Relu.apply(-2.0), 0.0);
        assert!((ActivationKind::ParametricRelu { alpha: 0.01 }.apply(-2.0) + 0.02).abs() < 1e-15);
        assert_eq!(ActivationKind::Sigmoid.apply(0.0), 0.5);
        assert_eq!(ActivationKind::Identity.apply(-3.5), -3.5);
    }

    #[test]
    fn prelu_zero_is_relu() {
        let p = ActivationKind::ParametricRelu { alpha: 0.0 };
        for i in -1000..=1000 {
            let x = i as f64 * 0.0137;
            assert_eq!(p.apply(x), ActivationKind::Relu.apply(x));
        }
    }

    #[test]
    fn sigmoid_tails_are_finite() {
        assert_eq!(sigmoid(800.0), 1.0);
        assert_eq!(sigmoid(-800.0), 0.0);
        assert!((sigmoid(1.0) + sigmoid(-1.0) - 1.0).abs() < 1e-16);
    }

    #[test]
    fn sigmoid_slope_at_zero() {
        let (v, s) = ActivationKind::Sigmoid.value_and_slope(0.0);
        assert_eq!(v, 0.5);
        assert_eq!(s, 0.25);
    }
}
