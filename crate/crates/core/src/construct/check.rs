use crate::error::{Error, Result};
use crate::grid::{grid_nd, GridSpec, TrainingSet};

/// Largest second hidden layer a constructor builds without an explicit budget.
pub const DEFAULT_WIDTH_BUDGET: u128 = 1_000_000;

/// Truncation bias range: `[0, 1)` in 1D, `[d-1, d)` in d dimensions.
pub(crate) fn check_b(b: f64, d: usize, name: &str) -> Result<()> {
    let lo = d as f64 - 1.0;
    let hi = d as f64;
    if !(b >= lo && b < hi) {
        return Err(Error::param(format!(
            "{name} = {b} is outside [{lo}, {hi}) for dimension {d}"
        )));
    }
    Ok(())
}

/// `(N, d)` of a training set laid out exactly as the uniform `[0,1]^d` grid.
pub(crate) fn grid_shape(data: &TrainingSet) -> Result<(usize, usize)> {
    let not_grid = || Error::param("training data is not a uniform [0,1]^d grid in row-major order");
    let n = match data.grid() {
        Some(meta) => meta.n,
        None => integer_root(data.len(), data.dim()).ok_or_else(not_grid)?,
    };
    let spec = GridSpec::new(data.dim(), n).map_err(|_| not_grid())?;
    let expected = grid_nd(spec, data.len() as u128).map_err(|_| not_grid())?;
    if expected.len() != data.len() {
        return Err(not_grid());
    }
    for (p, q) in expected.zip(data.points()) {
        if p.iter().zip(q).any(|(a, b)| (a - b).abs() > 1e-12) {
            return Err(not_grid());
        }
    }
    Ok((n, data.dim()))
}

fn integer_root(len: usize, d: usize) -> Option<usize> {
    let guess = (len as f64).powf(1.0 / d as f64).round() as usize;
    (guess.saturating_sub(1)..=guess + 1).find(|&n| n.checked_pow(d as u32) == Some(len))
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, y| m.max(y.abs()))
}
