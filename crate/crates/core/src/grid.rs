//! Uniform-grid training sets: 1D and tensor-product grids on `[0,1]^d`, halfspace labels,
//! function samples, and the reduced-grayscale image sets.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Enumeration budget used when callers do not pass their own.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 10_000_000;

/// Raw pixel value separating the dark class (below) from the light class.
pub const PIXEL_CLASS_THRESHOLD: u32 = 128;

/// Regular tensor grid description carried by a [`TrainingSet`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    /// Points per dimension.
    pub n: usize,
    /// Distance between neighbouring axis values.
    pub spacing: f64,
    /// Axis values shared by every dimension, increasing.
    pub axis: Vec<f64>,
}

impl GridMeta {
    /// Distance from `t` to the nearest axis value.
    pub fn axis_distance(&self, t: f64) -> f64 {
        nearest_distance(&self.axis, t)
    }
}

pub(crate) fn nearest_distance(sorted: &[f64], t: f64) -> f64 {
    let i = sorted.partition_point(|&v| v < t);
    let mut best = f64::INFINITY;
    if i < sorted.len() {
        best = best.min((sorted[i] - t).abs());
    }
    if i > 0 {
        best = best.min((t - sorted[i - 1]).abs());
    }
    best
}

/// `d` dimensions with `n` points each, spacing `1/(n-1)`, endpoints 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub d: usize,
    pub n: usize,
}

impl GridSpec {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::param("grid dimension must be at least 1"));
        }
        if n < 2 {
            return Err(Error::param(format!("grid needs N >= 2 points per dimension, got {n}")));
        }
        Ok(GridSpec { d, n })
    }

    pub fn spacing(&self) -> f64 {
        1.0 / (self.n - 1) as f64
    }

    /// `N^d`, or `None` when it does not fit in `u128`.
    pub fn point_count(&self) -> Option<u128> {
        checked_pow(self.n as u128, self.d)
    }

    pub fn meta(&self) -> GridMeta {
        GridMeta {
            n: self.n,
            spacing: self.spacing(),
            axis: axis_values(self.n),
        }
    }
}

pub(crate) fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn axis_values(n: usize) -> Vec<f64> {
    let denom = (n - 1) as f64;
    (0..n).map(|i| i as f64 / denom).collect()
}

/// `x_i = (i-1)/(N-1)` for `i = 1..N`.
pub fn grid_1d(n: usize) -> Result<Vec<f64>> {
    GridSpec::new(1, n).map(|s| axis_values(s.n))
}

/// Lazy row-major enumeration (last coordinate fastest) of a tensor grid.
#[derive(Debug, Clone)]
pub struct GridPoints {
    axis: Vec<f64>,
    index: Vec<usize>,
    remaining: usize,
}

impl GridPoints {
    fn new(axis: Vec<f64>, d: usize, count: usize) -> Self {
        GridPoints {
            axis,
            index: vec![0; d],
            remaining: count,
        }
    }
}

impl Iterator for GridPoints {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        if self.remaining == 0 {
            return None;
        }
        let point = self.index.iter().map(|&i| self.axis[i]).collect();
        self.remaining -= 1;
        for slot in self.index.iter_mut().rev() {
            *slot += 1;
            if *slot < self.axis.len() {
                break;
            }
            *slot = 0;
        }
        Some(point)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl ExactSizeIterator for GridPoints {}

fn enumerate_axis(axis: Vec<f64>, d: usize, budget: u128, what: &str) -> Result<GridPoints> {
    let count = checked_pow(axis.len() as u128, d).unwrap_or(u128::MAX);
    if count > budget {
        return Err(Error::Budget {
            what: what.to_string(),
            required: count,
            budget,
        });
    }
    Ok(GridPoints::new(axis, d, count as usize))
}

/// All `N^d` grid points, refusing when the count exceeds `budget`.
pub fn grid_nd(spec: GridSpec, budget: u128) -> Result<GridPoints> {
    enumerate_axis(axis_values(spec.n), spec.d, budget, "grid enumeration")
}

/// `-1` when the first coordinate is below 0.5, else `+1`.
pub fn label_halfspace(x: &[f64]) -> f64 {
    match x.first() {
        Some(&x1) if x1 < 0.5 => -1.0,
        _ => 1.0,
    }
}

/// Training set of halfspace labels on the grid.
pub fn halfspace_set(spec: GridSpec, budget: u128) -> Result<TrainingSet> {
    let points: Vec<Vec<f64>> = grid_nd(spec, budget)?.collect();
    let targets = points.iter().map(|p| label_halfspace(p)).collect();
    TrainingSet::new(spec.d, points, targets, Some(spec.meta()))
}

/// Samples `g` at every grid point, in grid enumeration order.
pub fn sample_function<F>(g: F, spec: GridSpec, budget: u128) -> Result<TrainingSet>
where
    F: Fn(&[f64]) -> f64,
{
    let points: Vec<Vec<f64>> = grid_nd(spec, budget)?.collect();
    let mut targets = Vec::with_capacity(points.len());
    for p in &points {
        let y = g(p);
        if !y.is_finite() {
            return Err(Error::Data(format!("target function is {y} at {p:?}")));
        }
        targets.push(y);
    }
    TrainingSet::new(spec.d, points, targets, Some(spec.meta()))
}

/// Largest multiple of `m` not exceeding `p`.
pub fn grayscale_reduce(p: u32, m: u32) -> Result<u32> {
    if p > 255 {
        return Err(Error::param(format!("pixel value {p} is outside 0..=255")));
    }
    if !(1..=255).contains(&m) {
        return Err(Error::param(format!("reduction step {m} is outside 1..=255")));
    }
    Ok(p / m * m)
}

/// Reduced-grayscale image grid: `pixels` coordinates, each taking the values `m*(i-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageGridSpec {
    pub pixels: usize,
    pub step: u32,
}

impl ImageGridSpec {
    pub fn new(pixels: usize, step: u32) -> Result<Self> {
        if pixels == 0 {
            return Err(Error::param("image needs at least one pixel"));
        }
        if !(1..=255).contains(&step) {
            return Err(Error::param(format!("reduction step {step} is outside 1..=255")));
        }
        Ok(ImageGridSpec { pixels, step })
    }

    /// `floor(255/m) + 1` grid values per pixel.
    pub fn n(&self) -> usize {
        (255 / self.step) as usize + 1
    }

    pub fn raw_values(&self) -> Vec<u32> {
        (0..self.n() as u32).map(|i| i * self.step).collect()
    }

    pub fn dark_values(&self) -> Vec<u32> {
        self.raw_values()
            .into_iter()
            .filter(|&v| v < PIXEL_CLASS_THRESHOLD)
            .collect()
    }

    pub fn light_values(&self) -> Vec<u32> {
        self.raw_values()
            .into_iter()
            .filter(|&v| v >= PIXEL_CLASS_THRESHOLD)
            .collect()
    }

    /// Normalized spacing `m/255` between neighbouring grid values.
    pub fn spacing(&self) -> f64 {
        self.step as f64 / 255.0
    }

    pub fn meta(&self) -> GridMeta {
        GridMeta {
            n: self.n(),
            spacing: self.spacing(),
            axis: self.raw_values().into_iter().map(normalize_pixel).collect(),
        }
    }

    /// `|dark|^P + |light|^P`, or `None` on overflow.
    pub fn training_set_size(&self) -> Option<u128> {
        let dark = checked_pow(self.dark_values().len() as u128, self.pixels)?;
        let light = checked_pow(self.light_values().len() as u128, self.pixels)?;
        dark.checked_add(light)
    }
}

pub fn normalize_pixel(raw: u32) -> f64 {
    raw as f64 / 255.0
}

/// Dark images (every pixel on a grid value below 128, label -1) followed by light images
/// (every pixel at or above 128, label +1), coordinates divided by 255.
pub fn image_training_set(spec: ImageGridSpec, budget: u128) -> Result<TrainingSet> {
    let size = spec.training_set_size().unwrap_or(u128::MAX);
    if size > budget {
        return Err(Error::Budget {
            what: format!(
                "image training set ({} + {} images for P={}, m={})",
                describe_pow(spec.dark_values().len(), spec.pixels),
                describe_pow(spec.light_values().len(), spec.pixels),
                spec.pixels,
                spec.step
            ),
            required: size,
            budget,
        });
    }
    let mut points = Vec::with_capacity(size as usize);
    let mut targets = Vec::with_capacity(size as usize);
    for (values, label) in [(spec.dark_values(), -1.0), (spec.light_values(), 1.0)] {
        let axis = values.into_iter().map(normalize_pixel).collect();
        for p in enumerate_axis(axis, spec.pixels, budget, "image class")? {
            points.push(p);
            targets.push(label);
        }
    }
    TrainingSet::new(spec.pixels, points, targets, Some(spec.meta()))
}

fn describe_pow(base: usize, exp: usize) -> String {
    format!("{base}^{exp}")
}

/// Points in `[0,1]^d` with one scalar target each.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    dim: usize,
    points: Vec<Vec<f64>>,
    targets: Vec<f64>,
    grid: Option<GridMeta>,
}

impl TrainingSet {
    pub fn new(
        dim: usize,
        points: Vec<Vec<f64>>,
        targets: Vec<f64>,
        grid: Option<GridMeta>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Data("dimension must be at least 1".into()));
        }
        if points.len() != targets.len() {
            return Err(Error::Data(format!(
                "{} points but {} targets",
                points.len(),
                targets.len()
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::Data(format!("point {i} has {} coordinates, expected {dim}", p.len())));
            }
            if p.iter().any(|c| !(0.0..=1.0).contains(c)) {
                return Err(Error::Data(format!("point {i} = {p:?} is outside [0,1]^{dim}")));
            }
        }
        if let Some(i) = targets.iter().position(|y| !y.is_finite()) {
            return Err(Error::Data(format!("target {i} is not finite")));
        }
        Ok(TrainingSet {
            dim,
            points,
            targets,
            grid,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn grid(&self) -> Option<&GridMeta> {
        self.grid.as_ref()
    }

    /// Max-norm distance from `x` to the data (1D: absolute distance).
    ///
    /// Uses the separable tensor-grid formula when grid metadata is present, otherwise scans
    /// every point.
    pub fn distance(&self, x: &[f64]) -> f64 {
        match &self.grid {
            Some(g) => x.iter().map(|&t| g.axis_distance(t)).fold(0.0, f64::max),
            None => self
                .points
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(x)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Writes `x1..xd,y` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let mut header: Vec<String> = (1..=self.dim).map(|j| format!("x{j}")).collect();
        header.push("y".into());
        wtr.write_record(&header)?;
        for (p, y) in self.points.iter().zip(&self.targets) {
            let row: Vec<String> = p.iter().chain(std::iter::once(y)).map(|v| format_f64(*v)).collect();
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let headers = rdr.headers()?.clone();
        if headers.len() < 2 || headers.get(headers.len() - 1) != Some("y") {
            return Err(Error::Data("csv header must be x1..xd,y".into()));
        }
        let dim = headers.len() - 1;
        let mut points = Vec::new();
        let mut targets = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let vals = rec
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| Error::Data(format!("bad number in csv: {e}")))?;
            targets.push(vals[dim]);
            points.push(vals[..dim].to_vec());
        }
        TrainingSet::new(dim, points, targets, None)
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(File::create(path)?)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(File::open(path)?)
    }
}

/// `.`-decimal scientific notation with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_1d_examples() {
        assert_eq!(grid_1d(2).unwrap(), vec![0.0, 1.0]);
        let g6 = grid_1d(6).unwrap();
        for (a, b) in g6.iter().zip([0.0, 0.2, 0.4, 0.6, 0.8, 1.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        let g9 = grid_1d(9).unwrap();
        assert_eq!(g9[1], 1.0 / 8.0);
        assert_eq!(g9[8], 1.0);
        assert!(matches!(grid_1d(1), Err(Error::Parameter(_))));
    }

    #[test]
    fn grid_nd_order() {
        let pts: Vec<_> = grid_nd(GridSpec::new(2, 2).unwrap(), 100).unwrap().collect();
        assert_eq!(
            pts,
            vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]
        );
        let pts: Vec<_> = grid_nd(GridSpec::new(2, 4).unwrap(), 100).unwrap().collect();
        assert_eq!(pts.len(), 16);
        assert!((pts[1][1] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(grid_nd(GridSpec::new(3, 4).unwrap(), 100).unwrap().count(), 64);
    }

    #[test]
    fn grid_nd_refuses_with_count() {
        match grid_nd(GridSpec::new(9, 128).unwrap(), DEFAULT_ENUMERATION_BUDGET) {
            Err(Error::Budget { required, .. }) => assert_eq!(required, 128u128.pow(9)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn halfspace_labels() {
        assert_eq!(label_halfspace(&[0.4, 0.9]), -1.0);
        assert_eq!(label_halfspace(&[0.5]), 1.0);
        assert_eq!(label_halfspace(&[1.0, 0.0, 0.0]), 1.0);
    }

    #[test]
    fn function_samples() {
        let spec = GridSpec::new(2, 2).unwrap();
        let set = sample_function(|x| x[0] + x[1], spec, 100).unwrap();
        assert_eq!(set.targets(), &[0.0, 1.0, 1.0, 2.0]);
        let zero = sample_function(|_| 0.0, GridSpec::new(3, 3).unwrap(), 100).unwrap();
        assert!(zero.targets().iter().all(|&y| y == 0.0));
        let sin = sample_function(|x| (std::f64::consts::PI * x[0]).sin(), GridSpec::new(1, 9).unwrap(), 100)
            .unwrap();
        for (i, y) in sin.targets().iter().enumerate() {
            assert_eq!(*y, (std::f64::consts::PI * (i as f64 / 8.0)).sin());
        }
        let bad = sample_function(|x| 1.0 / x[0], GridSpec::new(1, 3).unwrap(), 100);
        assert!(matches!(bad, Err(Error::Data(_))));
    }

    #[test]
    fn grayscale() {
        assert_eq!(grayscale_reduce(255, 2).unwrap(), 254);
        assert_eq!(grayscale_reduce(127, 2).unwrap(), 126);
        assert_eq!(grayscale_reduce(10, 10).unwrap(), 10);
        assert!(grayscale_reduce(256, 2).is_err());
        assert!(grayscale_reduce(3, 0).is_err());
    }

    #[test]
    fn image_sets() {
        let s = image_training_set(ImageGridSpec::new(1, 128).unwrap(), 100).unwrap();
        assert_eq!(s.points(), &[vec![0.0], vec![128.0 / 255.0]]);
        assert_eq!(s.targets(), &[-1.0, 1.0]);

        let s = image_training_set(ImageGridSpec::new(2, 64).unwrap(), 100).unwrap();
        assert_eq!(ImageGridSpec::new(2, 64).unwrap().raw_values(), vec![0, 64, 128, 192]);
        assert_eq!(s.len(), 8);
        assert_eq!(s.targets().iter().filter(|&&y| y < 0.0).count(), 4);

        match image_training_set(ImageGridSpec::new(9, 2).unwrap(), DEFAULT_ENUMERATION_BUDGET) {
            Err(Error::Budget { required, .. }) => assert_eq!(required, 2 * 64u128.pow(9)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn image_table_counts() {
        for (m, n, dark) in [(2u32, 128usize, 64usize), (5, 52, 26), (10, 26, 13)] {
            let spec = ImageGridSpec::new(9, m).unwrap();
            assert_eq!(spec.n(), n);
            assert_eq!(spec.dark_values().len(), dark);
            assert_eq!(spec.light_values().len(), dark);
        }
    }

    #[test]
    fn csv_header_and_roundtrip() {
        let set = sample_function(|x| x[0] * x[1], GridSpec::new(2, 3).unwrap(), 100).unwrap();
        let mut buf = Vec::new();
        set.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x1,x2,y\n"));
        let back = TrainingSet::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.points(), set.points());
        assert_eq!(back.targets(), set.targets());
    }

    #[test]
    fn distance_to_grid() {
        let set = halfspace_set(GridSpec::new(2, 3).unwrap(), 100).unwrap();
        assert!((set.distance(&[0.1, 0.5]) - 0.1).abs() < 1e-15);
        let plain = TrainingSet::new(2, set.points().to_vec(), set.targets().to_vec(), None).unwrap();
        assert!((plain.distance(&[0.1, 0.45]) - 0.1).abs() < 1e-15);
    }
}
