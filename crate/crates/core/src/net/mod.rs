//! Dense network representation, forward evaluation and the cost functions.

mod activation;
mod loss;
mod matrix;
mod mlp;

pub use activation::{activation_apply, sigmoid, ActivationKind};
pub use loss::{cross_entropy_target, loss, loss_with_residuals, LossKind, CROSS_ENTROPY_SLACK};
pub use matrix::Matrix;
pub use mlp::{validate_layers, DenseLayer, Finding, LayerTrace, Mlp};
