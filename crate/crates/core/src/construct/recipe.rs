//! Serializable description of a construction: enough to rebuild the network and the
//! training set it was built for.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::prelu::{approximator_1d_prelu, approximator_nd_prelu, classifier_1d_prelu, classifier_nd_prelu};
use super::relu::{
    approximator_1d, approximator_nd, classifier_1d, classifier_nd, classifier_unshared, image_classifier,
    ClassifierParams, CostVariant,
};
use super::sigmoid::{approximator_1d_sigmoid, approximator_nd_sigmoid, SigmoidSpikeParams};
use crate::error::{Error, Result};
use crate::grid::{halfspace_set, image_training_set, sample_function, GridSpec, ImageGridSpec, TrainingSet};
use crate::net::Mlp;

/// Target function sampled on the grid by the approximator families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Target {
    /// `prod_j sin(pi x_j)`.
    SinPi,
    Zero,
    Const { value: f64 },
    /// `sum_j x_j`.
    Sum,
    /// `prod_j x_j`.
    Product,
}

impl Target {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Target::SinPi => x.iter().map(|t| (PI * t).sin()).product(),
            Target::Zero => 0.0,
            Target::Const { value } => *value,
            Target::Sum => x.iter().sum(),
            Target::Product => x.iter().product(),
        }
    }

    /// Parses `sin-pi`, `zero`, `sum`, `product` or `const:<value>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sin-pi" => Ok(Target::SinPi),
            "zero" => Ok(Target::Zero),
            "sum" => Ok(Target::Sum),
            "product" => Ok(Target::Product),
            _ => match s.strip_prefix("const:") {
                Some(v) => v
                    .parse()
                    .map(|value| Target::Const { value })
                    .map_err(|_| Error::param(format!("bad constant in target '{s}'"))),
                None => Err(Error::param(format!(
                    "unknown target '{s}' (expected sin-pi, zero, sum, product or const:<value>)"
                ))),
            },
        }
    }
}

fn default_true() -> bool {
    true
}

/// One constructor call with all of its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Recipe {
    ReluClassifier {
        d: usize,
        n: usize,
        b1: f64,
        b2: f64,
        #[serde(default)]
        cost: CostVariant,
        #[serde(default = "default_true")]
        shared: bool,
    },
    ReluApprox {
        d: usize,
        n: usize,
        b: f64,
        target: Target,
    },
    ReluImageClassifier {
        pixels: usize,
        step: u32,
        b: f64,
    },
    PreluClassifier {
        d: usize,
        n: usize,
        b1: f64,
        b2: f64,
        alpha: f64,
        #[serde(default)]
        c: Option<f64>,
    },
    PreluApprox {
        d: usize,
        n: usize,
        b: f64,
        alpha: f64,
        #[serde(default)]
        c: Option<f64>,
        target: Target,
    },
    SigmoidApprox {
        d: usize,
        n: usize,
        k: f64,
        l: f64,
        b: f64,
        target: Target,
    },
}

impl Recipe {
    pub fn dim(&self) -> usize {
        match self {
            Recipe::ReluClassifier { d, .. }
            | Recipe::ReluApprox { d, .. }
            | Recipe::PreluClassifier { d, .. }
            | Recipe::PreluApprox { d, .. }
            | Recipe::SigmoidApprox { d, .. } => *d,
            Recipe::ReluImageClassifier { pixels, .. } => *pixels,
        }
    }

    fn classifier_params(d: usize, n: usize, b1: f64, b2: f64) -> ClassifierParams {
        ClassifierParams::nd(d, n, b1).with_biases(b1, b2)
    }

    /// Data the construction interpolates, refusing sets larger than `budget`.
    pub fn training_set(&self, budget: u128) -> Result<TrainingSet> {
        match self {
            Recipe::ReluClassifier { d, n, .. } | Recipe::PreluClassifier { d, n, .. } => {
                halfspace_set(GridSpec::new(*d, *n)?, budget)
            }
            Recipe::ReluApprox { d, n, target, .. }
            | Recipe::PreluApprox { d, n, target, .. }
            | Recipe::SigmoidApprox { d, n, target, .. } => {
                sample_function(|x| target.eval(x), GridSpec::new(*d, *n)?, budget)
            }
            Recipe::ReluImageClassifier { pixels, step, .. } => {
                image_training_set(ImageGridSpec::new(*pixels, *step)?, budget)
            }
        }
    }

    /// Runs the constructor and stores `self` in the network metadata.
    pub fn build(&self, budget: u128) -> Result<Mlp> {
        let mut net = match self {
            Recipe::ReluClassifier { d, n, b1, b2, cost, shared } => {
                let p = Self::classifier_params(*d, *n, *b1, *b2).with_cost(*cost);
                match (*shared, *d) {
                    (false, _) => classifier_unshared(&p)?,
                    (true, 1) => classifier_1d(&p)?,
                    (true, _) => classifier_nd(&p)?,
                }
            }
            Recipe::ReluApprox { d, b, .. } => {
                let data = self.training_set(budget)?;
                if *d == 1 {
                    approximator_1d(&data, *b)?
                } else {
                    approximator_nd(&data, *b)?
                }
            }
            Recipe::ReluImageClassifier { pixels, step, b } => {
                image_classifier(&ImageGridSpec::new(*pixels, *step)?, *b)?
            }
            Recipe::PreluClassifier { d, n, b1, b2, alpha, c } => {
                let p = Self::classifier_params(*d, *n, *b1, *b2);
                if *d == 1 {
                    classifier_1d_prelu(&p, *alpha, *c)?
                } else {
                    classifier_nd_prelu(&p, *alpha, *c)?
                }
            }
            Recipe::PreluApprox { d, b, alpha, c, .. } => {
                let data = self.training_set(budget)?;
                if *d == 1 {
                    approximator_1d_prelu(&data, *b, *alpha, *c)?
                } else {
                    approximator_nd_prelu(&data, *b, *alpha, *c)?
                }
            }
            Recipe::SigmoidApprox { d, k, l, b, .. } => {
                let data = self.training_set(budget)?;
                let p = SigmoidSpikeParams::new(*k, *l, *b);
                if *d == 1 {
                    approximator_1d_sigmoid(&data, &p)?
                } else {
                    approximator_nd_sigmoid(&data, &p)?
                }
            }
        };
        if let Some(meta) = net.metadata_mut() {
            meta.recipe = Some(self.clone());
        }
        Ok(net)
    }
}
