use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::{par_count, CHUNK};
use crate::error::{Error, Result};
use crate::construct::Recipe;
use crate::grid::checked_pow;
use crate::metadata::NetMetadata;
use crate::net::Mlp;

/// Evaluation budget used when callers do not pass their own.
pub const DEFAULT_EVALUATION_BUDGET: u128 = 100_000_000;
/// Fewest evaluations an estimate may use.
pub const MIN_EVALUATIONS: u128 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum SupportMethod {
    /// Cell midpoints of a uniform grid with the given cell width.
    Grid { resolution: f64 },
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportReport {
    pub method: SupportMethod,
    pub threshold: f64,
    pub dim: usize,
    pub evaluations: u64,
    pub hits: u64,
    /// Fraction of `[0,1]^d` where `|f| > threshold`.
    pub measure: f64,
    /// `sqrt(p (1 - p) / n)`; Monte Carlo only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standard_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic_bound: Option<f64>,
    /// `measure <= bound + 3 SE` when a bound is attached, else `true`.
    pub pass: bool,
}

impl SupportReport {
    pub fn with_bound(mut self, bound: f64) -> Self {
        self.analytic_bound = Some(bound);
        self.pass = self.measure <= bound + 3.0 * self.standard_error.unwrap_or(0.0);
        self
    }

    pub fn margin(&self) -> Option<f64> {
        self.analytic_bound.map(|b| b - self.measure)
    }
}

fn in_support(v: f64, threshold: f64) -> bool {
    v.is_nan() || v.abs() > threshold
}

fn check_budget(required: u128, budget: u128) -> Result<()> {
    if required < MIN_EVALUATIONS {
        return Err(Error::param(format!(
            "support estimate needs at least {MIN_EVALUATIONS} evaluations, got {required}"
        )));
    }
    if required > budget {
        return Err(Error::Budget {
            what: "support estimate".into(),
            required,
            budget,
        });
    }
    Ok(())
}

/// Measure of `{x in [0,1]^d : |f(x)| > threshold}`.
pub fn support_measure(
    net: &Mlp,
    method: SupportMethod,
    threshold: f64,
    budget: u128,
) -> Result<SupportReport> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(Error::param(format!("threshold must be non-negative, got {threshold}")));
    }
    let d = net.input_dim();
    let (evaluations, hits, standard_error) = match method {
        SupportMethod::Grid { resolution } => {
            if !(resolution > 0.0 && resolution <= 1.0) {
                return Err(Error::param(format!("grid resolution must be in (0, 1], got {resolution}")));
            }
            let m = (1.0 / resolution - 1e-9).ceil() as u128;
            let total = checked_pow(m, d).unwrap_or(u128::MAX);
            check_budget(total, budget)?;
            let total = total as u64;
            let m = m as u64;
            let hits = (0..total.div_ceil(CHUNK))
                .into_par_iter()
                .map(|c| {
                    let mut x = vec![0.0; d];
                    let mut hits = 0;
                    for flat in c * CHUNK..((c + 1) * CHUNK).min(total) {
                        let mut rest = flat;
                        for slot in x.iter_mut().rev() {
                            *slot = ((rest % m) as f64 + 0.5) / m as f64;
                            rest /= m;
                        }
                        hits += in_support(net.forward_unchecked(&x), threshold) as u64;
                    }
                    hits
                })
                .sum();
            (total, hits, None)
        }
        SupportMethod::MonteCarlo { samples, seed } => {
            check_budget(samples as u128, budget)?;
            let hits = par_count(d, samples, seed, |x| in_support(net.forward_unchecked(x), threshold));
            let p = hits as f64 / samples as f64;
            (samples, hits, Some((p * (1.0 - p) / samples as f64).sqrt()))
        }
    };
    Ok(SupportReport {
        method,
        threshold,
        dim: d,
        evaluations,
        hits,
        measure: hits as f64 / evaluations as f64,
        standard_error,
        analytic_bound: None,
        pass: true,
    })
}

/// `(N / (N - 1))^d (d - b)^d`, the volume bound of the tensor-hat constructions.
pub fn support_bound_analytic(n: usize, d: usize, b: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::param(format!("N must be at least 2, got {n}")));
    }
    if d == 0 {
        return Err(Error::param("dimension must be at least 1"));
    }
    let df = d as f64;
    if !(b >= df - 1.0 && b <= df) {
        return Err(Error::param(format!("b = {b} is outside [{}, {}]", df - 1.0, df)));
    }
    let nf = n as f64;
    Ok((nf / (nf - 1.0) * (df - b)).powi(d as i32))
}

/// Support bound for a network built from a recorded recipe: the formula above for the
/// classifiers, and `min(1, (2 N r)^d)` with `r = (d - b)/(N - 1)` for the approximators,
/// whose hats are twice as wide. `None` for the other families.
pub fn support_bound_for(meta: &NetMetadata) -> Option<f64> {
    match meta.recipe.as_ref()? {
        Recipe::ReluClassifier { d, n, b1, b2, .. } | Recipe::PreluClassifier { d, n, b1, b2, .. } => {
            support_bound_analytic(*n, *d, b1.min(*b2)).ok()
        }
        Recipe::ReluApprox { d, n, b, .. } | Recipe::PreluApprox { d, n, b, .. } => {
            let r = (*d as f64 - b) / (*n as f64 - 1.0);
            Some((2.0 * *n as f64 * r).powi(*d as i32).min(1.0))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{classifier_1d, ClassifierParams};
    use crate::net::{ActivationKind, DenseLayer, Matrix};

    #[test]
    fn bound_values() {
        assert_eq!(support_bound_analytic(4, 2, 2.0).unwrap(), 0.0);
        assert!((support_bound_analytic(4, 2, 1.5).unwrap() - 4.0 / 9.0).abs() < 1e-15);
        assert!((support_bound_analytic(4, 3, 2.7).unwrap() - 64.0 / 27.0 * 0.027).abs() < 1e-12);
        assert!(support_bound_analytic(1, 2, 1.5).is_err());
        assert!(support_bound_analytic(4, 2, 0.5).is_err());
    }

    #[test]
    fn zero_net_has_no_support() {
        let zero = Mlp::new(
            2,
            vec![
                DenseLayer::new(Matrix::zeros(1, 2), vec![0.0], ActivationKind::Relu),
                DenseLayer::new(Matrix::zeros(1, 1), vec![0.0], ActivationKind::Identity),
            ],
        )
        .unwrap();
        let r = support_measure(&zero, SupportMethod::MonteCarlo { samples: 5000, seed: 1 }, 0.0, 10_000).unwrap();
        assert_eq!(r.measure, 0.0);
        assert_eq!(r.standard_error, Some(0.0));
    }

    #[test]
    fn classifier_support_grid_and_mc() {
        let net = classifier_1d(&ClassifierParams::one_d(6, 0.5)).unwrap();
        let g = support_measure(&net, SupportMethod::Grid { resolution: 1e-4 }, 1e-12, 1 << 20).unwrap();
        assert!((g.measure - 0.5).abs() < 1e-3);
        let mc = support_measure(&net, SupportMethod::MonteCarlo { samples: 100_000, seed: 9 }, 1e-12, 1 << 20)
            .unwrap();
        assert!((mc.measure - g.measure).abs() <= 3.0 * mc.standard_error.unwrap() + 1e-3);
    }

    #[test]
    fn bound_from_recipe() {
        let r = Recipe::ReluApprox { d: 2, n: 3, b: 1.6, target: crate::construct::Target::Sum };
        let net = r.build(100).unwrap();
        let bound = support_bound_for(net.metadata().unwrap()).unwrap();
        assert!((bound - (6.0f64 * 0.2).powi(2).min(1.0)).abs() < 1e-12);
        let m = support_measure(&net, SupportMethod::MonteCarlo { samples: 100_000, seed: 1 }, 0.0, 1 << 20)
            .unwrap()
            .with_bound(bound);
        assert!(m.pass);
    }

    #[test]
    fn refusals() {
        let net = classifier_1d(&ClassifierParams::one_d(6, 0.5)).unwrap();
        let few = SupportMethod::MonteCarlo { samples: 10, seed: 0 };
        assert!(support_measure(&net, few, 0.0, 1 << 20).is_err());
        let many = SupportMethod::Grid { resolution: 1e-7 };
        assert!(matches!(support_measure(&net, many, 0.0, 1 << 20), Err(Error::Budget { .. })));
    }
}
