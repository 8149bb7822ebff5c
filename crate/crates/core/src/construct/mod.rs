//! Explicit weight constructions for ReLU, parametric-ReLU and sigmoid networks.

pub mod basis;
mod check;
pub mod prelu;
pub mod recipe;
pub mod relu;
pub mod sigmoid;

pub use basis::{
    hat_first_layer, sigmoid_spike, sigmoid_spike_first_layer, spike_normalizer, Basis, BasisTerm, HatLayout,
    HatMode,
};
pub use check::DEFAULT_WIDTH_BUDGET;
pub use prelu::{
    approximator_1d_prelu, approximator_nd_prelu, approximator_nd_prelu_with_budget, classifier_1d_prelu,
    classifier_nd_prelu, prelu_hat_first_layer, ClippedRamp,
};
pub use recipe::{Recipe, Target};
pub use relu::{
    approximator_1d, approximator_nd, approximator_nd_with_budget, classifier_1d, classifier_nd,
    classifier_unshared, image_classifier, ClassifierParams, CostVariant,
};
pub use sigmoid::{
    approximator_1d_sigmoid, approximator_nd_sigmoid, approximator_nd_sigmoid_with_budget, params_for_tolerance,
    tolerance_schedule, SigmoidSpikeParams,
};
