use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::{chunk_rng, fill_uniform, CHUNK};
use crate::error::{Error, Result};
use crate::grid::TrainingSet;
use crate::net::Mlp;

/// Chunks drawn per parallel round of rejection sampling.
const ROUND: u64 = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeadZoneReport {
    pub radius: f64,
    pub threshold: f64,
    pub probes: u64,
    /// Candidates drawn to collect the probes.
    pub attempts: u64,
    pub seed: u64,
    /// `absolute` in 1D, `max-norm` otherwise.
    pub norm: String,
    pub worst_value: f64,
    pub worst_point: Vec<f64>,
    pub pass: bool,
}

/// Largest distance any point of `[0,1]^d` can have from the data, when it is known
/// cheaply from the grid metadata.
pub fn max_reachable_distance(data: &TrainingSet) -> Option<f64> {
    let axis = &data.grid()?.axis;
    let first = *axis.first()?;
    let last = *axis.last()?;
    let gap = axis.windows(2).map(|w| (w[1] - w[0]) / 2.0).fold(0.0, f64::max);
    Some(first.max(1.0 - last).max(gap))
}

/// Draws `probes` uniform points at distance `> radius` from the data and checks
/// `|f| <= threshold` at each of them.
pub fn dead_zone_check(
    net: &Mlp,
    data: &TrainingSet,
    radius: f64,
    probes: u64,
    threshold: f64,
    seed: u64,
) -> Result<DeadZoneReport> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::param(format!("radius must be positive, got {radius}")));
    }
    if probes == 0 {
        return Err(Error::param("need at least one probe"));
    }
    let d = net.input_dim();
    if data.dim() != d {
        return Err(Error::structural(format!(
            "network takes {d} inputs but the data has dimension {}",
            data.dim()
        )));
    }
    if let Some(reach) = max_reachable_distance(data) {
        if radius >= reach - 1e-12 {
            return Err(Error::param(format!(
                "no point of the unit cube is farther than {reach} from the grid, so radius {radius} leaves nothing to probe"
            )));
        }
    }
    let max_attempts = probes.saturating_mul(1000).max(ROUND * CHUNK);

    let mut accepted: Vec<Vec<f64>> = Vec::with_capacity(probes.min(1 << 20) as usize);
    let mut next_chunk = 0;
    let mut attempts = 0;
    while (accepted.len() as u64) < probes {
        if attempts >= max_attempts {
            return Err(Error::Budget {
                what: format!(
                    "dead-zone probes at distance > {radius} (only {} found)",
                    accepted.len()
                ),
                required: probes as u128,
                budget: accepted.len() as u128,
            });
        }
        let batch: Vec<Vec<Vec<f64>>> = (next_chunk..next_chunk + ROUND)
            .into_par_iter()
            .map(|c| {
                let mut rng = chunk_rng(seed, c);
                let mut x = vec![0.0; d];
                let mut keep = Vec::new();
                for _ in 0..CHUNK {
                    fill_uniform(&mut rng, &mut x);
                    if data.distance(&x) > radius {
                        keep.push(x.clone());
                    }
                }
                keep
            })
            .collect();
        next_chunk += ROUND;
        attempts += ROUND * CHUNK;
        for keep in batch {
            accepted.extend(keep);
        }
    }
    accepted.truncate(probes as usize);

    let (worst_value, worst_index) = accepted
        .par_iter()
        .enumerate()
        .map(|(i, x)| (net.forward_unchecked(x).abs(), i))
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX),
            |a, b| {
                let rank = |v: f64| if v.is_nan() { f64::INFINITY } else { v };
                if rank(b.0) > rank(a.0) || (rank(b.0) == rank(a.0) && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    Ok(DeadZoneReport {
        radius,
        threshold,
        probes,
        attempts,
        seed,
        norm: if d == 1 { "absolute" } else { "max-norm" }.to_string(),
        worst_value,
        worst_point: accepted[worst_index].clone(),
        pass: worst_value <= threshold,
    })
}
