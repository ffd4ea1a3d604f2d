//! Multi-frequency far-field synthesis for sources with an optional reference
//! point source, plus the measurement noise models.

pub mod dataset;
pub mod noise;
pub mod quadrature;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scene::{Direction, ReferenceSource, SourceModel};

pub use dataset::{synthesize, Dataset, FarFieldRecord, PhasedField, PhaselessRecord};
pub use noise::{apply_absolute_noise, apply_relative_noise, NoiseDescriptor, NoiseKind};

/// Relative change between two density levels below which a far field is accepted.
pub const REFINEMENT_TOLERANCE: f64 = 1e-9;

/// Midpoint wavenumber lattice `k_j = (j - 1/2) Δk`, `Δk = k_max / N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveNumberGrid {
    k_min: f64,
    k_max: f64,
    count: usize,
}

impl WaveNumberGrid {
    pub fn new(k_min: f64, k_max: f64, count: usize) -> Result<Self> {
        if !(k_min > 0.0 && k_max > k_min && k_max.is_finite()) {
            return Err(Error::Precondition(format!("wavenumber band needs 0 < k_min < k_max, got ({k_min}, {k_max})")));
        }
        if count == 0 {
            return Err(Error::Precondition("wavenumber count must be at least 1".into()));
        }
        let grid = Self { k_min, k_max, count };
        if grid.node(0) < k_min - 1e-12 {
            return Err(Error::Precondition(format!("first node {} falls below k_min = {k_min}; increase k_max/N or lower k_min", grid.node(0))));
        }
        Ok(grid)
    }

    pub fn k_min(&self) -> f64 {
        self.k_min
    }

    pub fn k_max(&self) -> f64 {
        self.k_max
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn step(&self) -> f64 {
        self.k_max / self.count as f64
    }

    /// Zero-based node `k_{j+1}`.
    pub fn node(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.step()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.count).map(|j| self.node(j)).collect()
    }
}

/// `e^{-ik x̂·y}` summed against a weighted rule.
fn integrate(rule: &quadrature::WeightedNodes, d: &Direction, k: f64) -> Complex64 {
    let u = d.unit();
    let mut acc = Complex64::new(0.0, 0.0);
    for (p, w) in rule.points.iter().zip(rule.weights.iter()) {
        let (s, c) = (k * (u.x * p.x + u.y * p.y)).sin_cos();
        acc += Complex64::new(w * c, -w * s);
    }
    acc
}

fn model_rule(model: &SourceModel, k: f64, scale: f64) -> Result<quadrature::WeightedNodes> {
    let mut all = quadrature::WeightedNodes::default();
    for c in model.components() {
        let r = quadrature::shape_rule(&c.shape, &c.profile, k, scale)?;
        all.points.extend(r.points);
        all.weights.extend(r.weights);
    }
    Ok(all)
}

/// Far fields `u∞_S(x̂, k)` for every direction at one wavenumber.
///
/// Each value is recomputed at 1.5× node density; if the two disagree by
/// more than [`REFINEMENT_TOLERANCE`] relative to `max(|u|, Σ|w f|)` the rule
/// is refined once more before giving up.
pub fn far_fields_at(model: &SourceModel, k: f64, directions: &[Direction]) -> Result<Vec<Complex64>> {
    if !(k > 0.0) {
        return Err(Error::Precondition(format!("wavenumber must be positive, got {k}")));
    }
    let g = model.frequency_factor(k)?;
    let base = model_rule(model, k, 1.0)?;
    let fine = model_rule(model, k, 1.5)?;
    let mass = fine.mass();
    let coarse: Vec<Complex64> = directions.par_iter().map(|d| integrate(&base, d, k)).collect();
    let mut best: Vec<Complex64> = directions.par_iter().map(|d| integrate(&fine, d, k)).collect();
    let change =
        |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| (x - y).norm() / y.norm().max(mass).max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
    let first = change(&coarse, &best);
    if mass > 0.0 && first > REFINEMENT_TOLERANCE {
        let finer = model_rule(model, k, 2.25)?;
        let refined: Vec<Complex64> = directions.par_iter().map(|d| integrate(&finer, d, k)).collect();
        let second = change(&best, &refined);
        if second > REFINEMENT_TOLERANCE {
            return Err(Error::Quadrature { achieved: second, scale: 2.25 });
        }
        best = refined;
    }
    Ok(best.into_iter().map(|v| g * v).collect())
}

/// `u∞_S(x̂, k) = g(k) ∫_D e^{-ik x̂·y} f(y) dy`.
pub fn far_field(model: &SourceModel, d: &Direction, k: f64) -> Result<Complex64> {
    Ok(far_fields_at(model, k, std::slice::from_ref(d))?[0])
}

/// Far field of the reference monopole alone, `τ e^{-ik x̂·z0}`.
pub fn point_source_term(reference: &ReferenceSource, d: &Direction, k: f64) -> Complex64 {
    reference.tau * Complex64::from_polar(1.0, -k * d.project(reference.z0))
}

/// `u∞_{S,z0}(x̂, k, τ) = u∞_S(x̂, k) + τ e^{-ik x̂·z0}`.
pub fn far_field_with_ref(model: &SourceModel, reference: &ReferenceSource, d: &Direction, k: f64) -> Result<Complex64> {
    ReferenceSource::check_outside(model, reference.z0)?;
    Ok(far_field(model, d, k)? + point_source_term(reference, d, k))
}
