//! Explicitly weighted networks that reach the global minimum of their training cost.
//!
//! The constructions place a hat (or sigmoid spike) at every grid point, truncate the sum of
//! hats so the network only responds near the training data, and read the targets off the
//! output layer. The [`extend`] module appends extra hidden layers without changing the
//! function, and [`verify`] measures loss, support and dead zones.
//!
//! ```
//! use overfit_forge::{classifier_1d, halfspace_set, loss, ClassifierParams, GridSpec, LossKind};
//!
//! let net = classifier_1d(&ClassifierParams::one_d(6, 0.9)).unwrap();
//! let data = halfspace_set(GridSpec::new(1, 6).unwrap(), 1000).unwrap();
//! assert!(loss(&net, &data, LossKind::Mse).unwrap() <= 1e-12);
//! assert_eq!(net.forward(&[0.85]).unwrap(), 0.0);
//! ```

/// Library version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod construct;
pub mod error;
pub mod extend;
pub mod grid;
pub mod metadata;
pub mod net;
pub mod verify;

pub use construct::*;
pub use error::{Error, Result};
pub use extend::{
    convergence_order, extend, measure_extension_error, ConvergenceOrder, ExtensionError, ExtensionMode,
    ExtensionParams, ExtensionRecord,
};
pub use grid::{
    grayscale_reduce, grid_1d, grid_nd, halfspace_set, image_training_set, label_halfspace, normalize_pixel,
    sample_function, GridMeta, GridSpec, ImageGridSpec, TrainingSet, DEFAULT_ENUMERATION_BUDGET,
    PIXEL_CLASS_THRESHOLD,
};
pub use metadata::NetMetadata;
pub use net::*;
pub use verify::{
    check_global_optimum, dead_zone_check, image_accuracy_analytic, image_accuracy_estimate,
    support_bound_analytic, support_bound_for, support_measure, DeadZoneReport, ImageAccuracyReport, SupportMethod,
    SupportReport, Tolerances, VerificationReport,
};
