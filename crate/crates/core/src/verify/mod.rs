//! Certification tools: global-optimum checks, support and dead-zone measurement, image
//! accuracy estimates. Every sampler is seeded explicitly and gives the same answer for any
//! worker count.

mod dead_zone;
mod image;
mod optimum;
pub mod rng;
mod support;

pub use dead_zone::{dead_zone_check, max_reachable_distance, DeadZoneReport};
pub use image::{image_accuracy_analytic, image_accuracy_estimate, ImageAccuracyReport, DECISION_MARGIN};
pub use optimum::{check_global_optimum, Tolerances, VerificationReport};
pub use support::{
    support_bound_analytic, support_bound_for, support_measure, SupportMethod, SupportReport, DEFAULT_EVALUATION_BUDGET,
    MIN_EVALUATIONS,
};
