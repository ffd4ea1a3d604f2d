//! Multiplicative and additive perturbations of phaseless magnitudes.
//!
//! Every record draws its own `e ~ U(-1, 1)` from a ChaCha8 stream: the
//! generator is seeded with the run seed and positioned on stream number
//! `record index`, so draws depend only on `(seed, index)` and never on the
//! evaluation order.

use rand::distributions::{Distribution, Open01};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::dataset::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    None,
    Relative,
    Absolute,
}

impl NoiseKind {
    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::None => "none",
            NoiseKind::Relative => "relative",
            NoiseKind::Absolute => "absolute",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseDescriptor {
    pub kind: NoiseKind,
    pub level: f64,
    pub seed: u64,
}

impl NoiseDescriptor {
    pub fn none() -> Self {
        Self { kind: NoiseKind::None, level: 0.0, seed: 0 }
    }
}

/// The uniform draw in the open interval `(-1, 1)` for one record.
pub fn uniform_draw(seed: u64, record_index: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(record_index);
    let u: f64 = Open01.sample(&mut rng);
    2.0 * u - 1.0
}

pub fn perturb_relative(magnitude: f64, level: f64, draw: f64) -> f64 {
    magnitude * (1.0 + level * draw)
}

pub fn perturb_absolute(magnitude: f64, level: f64, draw: f64) -> f64 {
    (magnitude + level * draw).max(0.0)
}

fn apply(ds: &Dataset, kind: NoiseKind, level: f64, seed: u64, perturb: fn(f64, f64, f64) -> f64) -> Dataset {
    assert!(level >= 0.0 && level.is_finite(), "noise level must be a finite non-negative number");
    let mut out = ds.clone();
    for (i, r) in out.phaseless.iter_mut().enumerate() {
        r.magnitude = perturb(r.magnitude, level, uniform_draw(seed, i as u64));
    }
    out.noise = NoiseDescriptor { kind, level, seed };
    out
}

/// `m ↦ m (1 + δ e)`. Phased truth is left untouched.
pub fn apply_relative_noise(ds: &Dataset, level: f64, seed: u64) -> Dataset {
    apply(ds, NoiseKind::Relative, level, seed, perturb_relative)
}

/// `m ↦ max(0, m + δ e)`.
pub fn apply_absolute_noise(ds: &Dataset, level: f64, seed: u64) -> Dataset {
    apply(ds, NoiseKind::Absolute, level, seed, perturb_absolute)
}
