use serde::{Deserialize, Serialize};

use super::rng::par_count;
use crate::error::{Error, Result};
use crate::grid::{normalize_pixel, ImageGridSpec, PIXEL_CLASS_THRESHOLD};
use crate::net::Mlp;

/// Outputs at least this far from zero count as a decision.
pub const DECISION_MARGIN: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageAccuracyReport {
    pub pixels: usize,
    pub step: u32,
    pub samples: u64,
    pub seed: u64,
    pub correct: u64,
    pub accuracy: f64,
    pub standard_error: f64,
    /// Share of ground-truth images lying on the reduced grid.
    pub analytic: f64,
}

/// `(|dark| / 128)^P / 2 + (|light| / 128)^P / 2`: the chance that a uniformly drawn
/// ground-truth image has every pixel on the reduced grid.
pub fn image_accuracy_analytic(spec: &ImageGridSpec) -> f64 {
    let per_class = PIXEL_CLASS_THRESHOLD as f64;
    let p = spec.pixels as i32;
    let dark = (spec.dark_values().len() as f64 / per_class).powi(p);
    let light = (spec.light_values().len() as f64 / per_class).powi(p);
    0.5 * (dark + light)
}

/// Draws ground-truth images (class uniform, then every raw pixel uniform within the class)
/// and counts outputs `<= -0.5` for dark and `>= 0.5` for light as correct.
pub fn image_accuracy_estimate(
    net: &Mlp,
    spec: &ImageGridSpec,
    samples: u64,
    seed: u64,
) -> Result<ImageAccuracyReport> {
    if net.input_dim() != spec.pixels {
        return Err(Error::structural(format!(
            "network takes {} inputs but images have {} pixels",
            net.input_dim(),
            spec.pixels
        )));
    }
    if samples == 0 {
        return Err(Error::param("need at least one sample"));
    }
    // The uniform draws in [0,1) pick the class from the first coordinate and the raw
    // pixel values from the rest.
    let correct = par_count(spec.pixels + 1, samples, seed, |u| {
        let light = u[0] >= 0.5;
        let base = if light { PIXEL_CLASS_THRESHOLD } else { 0 };
        let x: Vec<f64> = u[1..]
            .iter()
            .map(|&t| normalize_pixel(base + ((t * PIXEL_CLASS_THRESHOLD as f64) as u32).min(127)))
            .collect();
        let f = net.forward_unchecked(&x);
        if light {
            f >= DECISION_MARGIN
        } else {
            f <= -DECISION_MARGIN
        }
    });
    let accuracy = correct as f64 / samples as f64;
    Ok(ImageAccuracyReport {
        pixels: spec.pixels,
        step: spec.step,
        samples,
        seed,
        correct,
        accuracy,
        standard_error: (accuracy * (1.0 - accuracy) / samples as f64).sqrt(),
        analytic: image_accuracy_analytic(spec),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::image_classifier;

    #[test]
    fn analytic_values() {
        assert_eq!(image_accuracy_analytic(&ImageGridSpec::new(9, 2).unwrap()), 1.0 / 512.0);
        assert_eq!(image_accuracy_analytic(&ImageGridSpec::new(2, 64).unwrap()), 1.0 / 4096.0);
        assert_eq!(image_accuracy_analytic(&ImageGridSpec::new(3, 1).unwrap()), 1.0);
    }

    #[test]
    fn every_image_on_grid_when_step_is_one() {
        let spec = ImageGridSpec::new(1, 1).unwrap();
        let net = image_classifier(&spec, 0.5).unwrap();
        let r = image_accuracy_estimate(&net, &spec, 20_000, 2).unwrap();
        assert_eq!(r.accuracy, 1.0);
    }
}
