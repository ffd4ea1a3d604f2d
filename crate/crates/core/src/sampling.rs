//! Direct sampling indicators evaluated on rectangular grids.
//!
//! Both indicators integrate over the measured wavenumbers with the midpoint
//! rule on the data lattice, summing in direction-major, k-ascending order so
//! that every node value is independent of scheduling.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forward::{Dataset, PhasedField, WaveNumberGrid};
use crate::scene::{Direction, Point2};

/// Corner-inclusive uniform lattice over `[x_lo, x_hi] × [y_lo, y_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingGrid {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    pub nx: usize,
    pub ny: usize,
}

impl SamplingGrid {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(x_lo < x_hi && y_lo < y_hi) || ![x_lo, x_hi, y_lo, y_hi].iter().all(|v| v.is_finite()) {
            return Err(Error::Precondition(format!("sampling grid needs finite x_lo < x_hi and y_lo < y_hi, got [{x_lo}, {x_hi}] × [{y_lo}, {y_hi}]")));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::Precondition(format!("sampling grid needs at least 2 nodes per axis, got {nx} × {ny}")));
        }
        Ok(Self { x_lo, x_hi, y_lo, y_hi, nx, ny })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x(&self, ix: usize) -> f64 {
        if ix + 1 == self.nx {
            return self.x_hi;
        }
        self.x_lo + ix as f64 * (self.x_hi - self.x_lo) / (self.nx - 1) as f64
    }

    pub fn y(&self, iy: usize) -> f64 {
        if iy + 1 == self.ny {
            return self.y_hi;
        }
        self.y_lo + iy as f64 * (self.y_hi - self.y_lo) / (self.ny - 1) as f64
    }

    /// Node at row-major index `iy * nx + ix`, row 0 at `y_lo`.
    pub fn node(&self, index: usize) -> Point2 {
        Point2::new(self.x(index % self.nx), self.y(index / self.nx))
    }

    pub fn spacing(&self) -> (f64, f64) {
        ((self.x_hi - self.x_lo) / (self.nx - 1) as f64, (self.y_hi - self.y_lo) / (self.ny - 1) as f64)
    }
}

/// Provenance of a field's values.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldInfo {
    pub indicator: String,
    pub angles: Vec<f64>,
    pub z0: Option<Point2>,
    pub tau: Option<Complex64>,
}

/// Raw (unnormalized) indicator samples, row-major with row 0 at `y_lo`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorField {
    pub grid: SamplingGrid,
    pub values: Vec<f64>,
    pub info: FieldInfo,
}

impl IndicatorField {
    pub fn argmax(&self) -> (Point2, f64) {
        self.argmax_where(|_| true).expect("field is never empty")
    }

    /// Largest value over nodes satisfying `keep`; ties go to the lowest index.
    pub fn argmax_where(&self, keep: impl Fn(Point2) -> bool) -> Option<(Point2, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, v) in self.values.iter().enumerate() {
            if keep(self.grid.node(i)) && best.is_none_or(|(_, b)| *v > b) {
                best = Some((i, *v));
            }
        }
        best.map(|(i, v)| (self.grid.node(i), v))
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)))
    }

    /// Values mapped linearly so that min → 0 and max → 1 (all zero if flat).
    pub fn normalized(&self) -> Vec<f64> {
        let (lo, hi) = self.min_max();
        let span = hi - lo;
        self.values.iter().map(|v| if span > 0.0 { (v - lo) / span } else { 0.0 }).collect()
    }

    /// Grid-local maxima (8-neighborhood, ties allowed), strongest first, with
    /// greedy suppression of any maximum within `radius` of a stronger one.
    pub fn peaks(&self, radius: f64) -> Vec<(Point2, f64)> {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let mut maxima: Vec<usize> = (0..self.values.len())
            .filter(|&i| {
                let (ix, iy) = ((i % nx) as isize, (i / nx) as isize);
                let v = self.values[i];
                (-1..=1).all(|dy| {
                    (-1..=1).all(|dx| {
                        let (jx, jy) = (ix + dx, iy + dy);
                        if (dx == 0 && dy == 0) || jx < 0 || jy < 0 || jx >= nx as isize || jy >= ny as isize {
                            return true;
                        }
                        self.values[jy as usize * nx + jx as usize] <= v
                    })
                })
            })
            .collect();
        maxima.sort_by(|a, b| self.values[*b].total_cmp(&self.values[*a]).then(a.cmp(b)));
        let mut kept: Vec<(Point2, f64)> = Vec::new();
        for i in maxima {
            let p = self.grid.node(i);
            if kept.iter().all(|(q, _)| q.distance(p) > radius) {
                kept.push((p, self.values[i]));
            }
        }
        kept
    }
}

/// Anything that assigns a non-negative score to a sampling point.
pub trait Indicator: Sync {
    fn value(&self, z: Point2) -> f64;
    fn info(&self) -> FieldInfo;
}

/// `G(z, x̂) ≈ Δk Σ_j u∞(x̂, k_j) e^{i k_j x̂·z}`.
pub fn g_functional(z: Point2, d: &Direction, slice: &[Complex64], grid: &WaveNumberGrid) -> Result<Complex64> {
    if slice.len() != grid.len() {
        return Err(Error::Dataset(format!("far-field slice has {} values, lattice has {} nodes", slice.len(), grid.len())));
    }
    Ok(g_sum(d.project(z), slice, grid))
}

fn g_sum(projection: f64, slice: &[Complex64], grid: &WaveNumberGrid) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, u) in slice.iter().enumerate() {
        acc += u * Complex64::from_polar(1.0, grid.node(j) * projection);
    }
    acc * grid.step()
}

/// `|u∞_{S,z0}|² − |u∞_S|² − |τ|²` from the two measured magnitudes.
pub fn f_functional(m_with: f64, m_without: f64, tau: Complex64) -> f64 {
    m_with * m_with - m_without * m_without - tau.norm_sqr()
}

fn select_directions(available: &[Direction], theta: &[Direction]) -> Result<Vec<usize>> {
    if theta.is_empty() {
        return Err(Error::Precondition("at least one observation direction is required".into()));
    }
    theta
        .iter()
        .map(|t| available.iter().position(|d| d.angle() == t.angle()).ok_or_else(|| Error::Dataset(format!("no records for direction {}", t.angle()))))
        .collect()
}

/// Phaseless indicator built from magnitudes with `τ = 0` and `τ = τ1`.
#[derive(Debug, Clone)]
pub struct PhaselessIndicator {
    grid: WaveNumberGrid,
    directions: Vec<Direction>,
    z0: Point2,
    tau: Complex64,
    /// `F(x̂, k_j)`, direction-major.
    f: Vec<f64>,
}

impl PhaselessIndicator {
    pub fn new(ds: &Dataset, theta: &[Direction], tau1: Complex64) -> Result<Self> {
        if tau1 == Complex64::new(0.0, 0.0) {
            return Err(Error::Precondition("the phaseless indicator needs a non-zero strength".into()));
        }
        ds.check_lattice()?;
        let zero = ds.require_tau(Complex64::new(0.0, 0.0))?;
        let with = ds.require_tau(tau1)?;
        let picked = select_directions(&ds.directions, theta)?;
        let nk = ds.grid.len();
        let mut f = Vec::with_capacity(picked.len() * nk);
        for &d in &picked {
            for j in 0..nk {
                f.push(f_functional(ds.magnitude(d, j, with), ds.magnitude(d, j, zero), tau1));
            }
        }
        Ok(Self { grid: ds.grid, directions: picked.iter().map(|&d| ds.directions[d]).collect(), z0: ds.z0, tau: tau1, f })
    }

    /// All directions present in the dataset.
    pub fn from_dataset(ds: &Dataset, tau1: Complex64) -> Result<Self> {
        Self::new(ds, &ds.directions.clone(), tau1)
    }
}

impl Indicator for PhaselessIndicator {
    fn value(&self, z: Point2) -> f64 {
        let nk = self.grid.len();
        let step = self.grid.step();
        let offset = z - self.z0;
        let mut total = 0.0;
        for (d, dir) in self.directions.iter().enumerate() {
            let s = dir.project(offset);
            let mut acc = 0.0;
            for j in 0..nk {
                acc += self.f[d * nk + j] * (self.grid.node(j) * s).cos();
            }
            total += (step * acc).abs();
        }
        total
    }

    fn info(&self) -> FieldInfo {
        FieldInfo { indicator: "i1".into(), angles: self.directions.iter().map(|d| d.angle()).collect(), z0: Some(self.z0), tau: Some(self.tau) }
    }
}

/// Phased indicator `Σ_{x̂∈Θ} |G(z, x̂)|`.
#[derive(Debug, Clone)]
pub struct PhasedIndicator {
    grid: WaveNumberGrid,
    directions: Vec<Direction>,
    values: Vec<Complex64>,
}

impl PhasedIndicator {
    pub fn new(field: &PhasedField, theta: &[Direction]) -> Result<Self> {
        let picked = select_directions(&field.directions, theta)?;
        let values = picked.iter().flat_map(|&d| field.slice(d).iter().copied()).collect();
        Ok(Self { grid: field.grid, directions: picked.iter().map(|&d| field.directions[d]).collect(), values })
    }

    pub fn from_field(field: &PhasedField) -> Result<Self> {
        Self::new(field, &field.directions.clone())
    }

    /// `G(z, x̂)` for the `index`-th direction of Θ.
    pub fn g(&self, z: Point2, index: usize) -> Complex64 {
        let nk = self.grid.len();
        g_sum(self.directions[index].project(z), &self.values[index * nk..(index + 1) * nk], &self.grid)
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }
}

impl Indicator for PhasedIndicator {
    fn value(&self, z: Point2) -> f64 {
        (0..self.directions.len()).map(|d| self.g(z, d).norm()).sum()
    }

    fn info(&self) -> FieldInfo {
        FieldInfo { indicator: "i2".into(), angles: self.directions.iter().map(|d| d.angle()).collect(), z0: None, tau: None }
    }
}

/// Samples `indicator` at every node of `grid`.
pub fn evaluate_on_grid(indicator: &impl Indicator, grid: &SamplingGrid) -> IndicatorField {
    let values = (0..grid.len()).into_par_iter().map(|i| indicator.value(grid.node(i))).collect();
    IndicatorField { grid: *grid, values, info: indicator.info() }
}

/// Pointwise minimum of min-max normalized fields on a shared grid, used to
/// suppress the mirror images of phaseless indicators with different `z0`.
pub fn combine_min_normalized(fields: &[IndicatorField]) -> Result<IndicatorField> {
    let first = fields.first().ok_or_else(|| Error::Precondition("nothing to combine".into()))?;
    if fields.iter().any(|f| f.grid != first.grid) {
        return Err(Error::Precondition("combined fields must share one sampling grid".into()));
    }
    let normalized: Vec<Vec<f64>> = fields.iter().map(IndicatorField::normalized).collect();
    let values = (0..first.values.len()).map(|i| normalized.iter().map(|v| v[i]).fold(f64::INFINITY, f64::min)).collect();
    let info = FieldInfo { indicator: format!("min-normalized({})", fields.len()), angles: first.info.angles.clone(), z0: None, tau: first.info.tau };
    Ok(IndicatorField { grid: first.grid, values, info })
}
