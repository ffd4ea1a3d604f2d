//! Recovering a complex number from its distances to three known anchors,
//! and applying that pointwise to recover phased far fields from the
//! magnitudes measured with three reference strengths.
//!
//! The construction intersects the circles around the first two anchors:
//! `M` is the point at distance `r2` from `z2` on the ray towards `z1`, the
//! two intersection candidates are `M` rotated about `z2` by `∓α`, and the
//! third anchor picks the candidate whose distance to it best matches `r3`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forward::{Dataset, FarFieldRecord, PhasedField};

/// Distances at or below this are treated as an exact hit on the anchor.
pub const ZERO_DISTANCE: f64 = 1e-14;
/// Relative collinearity threshold for anchor triples.
pub const COLLINEARITY_EPS: f64 = 1e-10;

/// Three pairwise distinct, non-collinear points of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnchorTriple([Complex64; 3]);

impl AnchorTriple {
    pub fn new(z1: Complex64, z2: Complex64, z3: Complex64) -> Result<Self> {
        let (a, b) = (z2 - z1, z3 - z1);
        let scale = a.norm().max(b.norm());
        if !(scale > 0.0) || z1 == z2 || z1 == z3 || z2 == z3 {
            return Err(Error::Anchors(format!("anchors must be pairwise distinct: {z1}, {z2}, {z3}")));
        }
        if !((a * b.conj()).im.abs() > COLLINEARITY_EPS * scale * scale) {
            return Err(Error::Anchors(format!("anchors {z1}, {z2}, {z3} are collinear")));
        }
        Ok(Self([z1, z2, z3]))
    }

    pub fn points(&self) -> [Complex64; 3] {
        self.0
    }

    pub fn distances_to(&self, z: Complex64) -> DistanceTriple {
        DistanceTriple(self.0.map(|a| (z - a).norm()))
    }
}

/// Measured distances `r_j = |z - z_j|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceTriple(pub [f64; 3]);

impl DistanceTriple {
    pub fn new(r1: f64, r2: f64, r3: f64) -> Result<Self> {
        let r = [r1, r2, r3];
        if r.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::Precondition(format!("distances must be finite and non-negative, got {r:?}")));
        }
        Ok(Self(r))
    }
}

/// The two rotation candidates produced before disambiguation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidates {
    pub a: Complex64,
    pub b: Complex64,
}

/// Circle-intersection candidates from the first two anchors.
pub fn candidates(anchors: &AnchorTriple, dists: &DistanceTriple) -> Candidates {
    let [z1, z2, _] = anchors.0;
    let [r1, r2, _] = dists.0;
    let d12 = (z1 - z2).norm();
    let m = (r2 / d12) * z1 + ((d12 - r2) / d12) * z2;
    // Angle at z2 between the rays towards z1 and towards z.
    let cos_alpha = ((r2 * r2 + d12 * d12 - r1 * r1) / (2.0 * r2 * d12)).clamp(-1.0, 1.0);
    let sin_alpha = ((1.0 - cos_alpha) * (1.0 + cos_alpha)).sqrt();
    let rot = Complex64::new(cos_alpha, sin_alpha);
    let arm = m - z2;
    Candidates { a: z2 + arm * rot.conj(), b: z2 + arm * rot }
}

/// Below this sine of the intersection angle the anchors are relabeled.
pub const PIVOT_THRESHOLD: f64 = 0.1;

/// Sine of the angle at `z` subtended by anchors `p` and `q`, from distances only.
fn crossing_sine(anchors: &[Complex64; 3], r: &[f64; 3], p: usize, q: usize) -> f64 {
    let d = (anchors[p] - anchors[q]).norm();
    let cos = ((r[p] * r[p] + r[q] * r[q] - d * d) / (2.0 * r[p] * r[q])).clamp(-1.0, 1.0);
    ((1.0 - cos) * (1.0 + cos)).sqrt()
}

/// Recovers `z` from `r_j = |z - z_j|`.
///
/// The circles around the first two anchors meet at a shallow angle when `z`
/// is close to the line through them; in that case the anchors are cyclically
/// relabeled so that the best-conditioned pair is intersected. All labelings
/// agree in exact arithmetic.
pub fn retrieve_point(anchors: &AnchorTriple, dists: &DistanceTriple) -> Complex64 {
    let z = anchors.0;
    let r = dists.0;
    if let Some(j) = (0..3).find(|&j| r[j] <= ZERO_DISTANCE) {
        return z[j];
    }
    let mut order = [0, 1, 2];
    if crossing_sine(&z, &r, 0, 1) < PIVOT_THRESHOLD {
        let rotations = [[0, 1, 2], [1, 2, 0], [2, 0, 1]];
        order = rotations.into_iter().max_by(|a, b| crossing_sine(&z, &r, a[0], a[1]).total_cmp(&crossing_sine(&z, &r, b[0], b[1]))).unwrap();
    }
    let anchors = AnchorTriple(order.map(|i| z[i]));
    let dists = DistanceTriple(order.map(|i| r[i]));
    select_candidate(&anchors, &dists)
}

/// The four construction steps for a fixed labeling.
pub fn select_candidate(anchors: &AnchorTriple, dists: &DistanceTriple) -> Complex64 {
    let z = anchors.0;
    let r = dists.0;
    if let Some(j) = (0..3).find(|&j| r[j] <= ZERO_DISTANCE) {
        return z[j];
    }
    let c = candidates(anchors, dists);
    let miss = |p: Complex64| ((p - z[2]).norm() - r[2]).abs();
    if miss(c.b) < miss(c.a) {
        c.b
    } else {
        c.a
    }
}

/// Fails unless `τ2 - τ1` and `τ3 - τ1` are linearly independent over ℝ.
pub fn check_strengths(taus: [Complex64; 3]) -> Result<()> {
    AnchorTriple::new(taus[0], taus[1], taus[2])
        .map(|_| ())
        .map_err(|_| Error::Precondition(format!("strengths {} {} {} must not be collinear in the complex plane", taus[0], taus[1], taus[2])))
}

/// Phased far fields recovered at every (direction, node) of `ds` from the
/// magnitudes measured with strengths `taus` (in that anchor order).
pub fn retrieve_far_field(ds: &Dataset, taus: [Complex64; 3]) -> Result<Vec<FarFieldRecord>> {
    Ok(retrieve_phased_field(ds, taus)?.records())
}

/// Same as [`retrieve_far_field`], returned as a lattice.
pub fn retrieve_phased_field(ds: &Dataset, taus: [Complex64; 3]) -> Result<PhasedField> {
    check_strengths(taus)?;
    ds.check_lattice()?;
    let idx = [ds.require_tau(taus[0])?, ds.require_tau(taus[1])?, ds.require_tau(taus[2])?];
    let nk = ds.grid.len();
    let values = (0..ds.directions.len() * nk)
        .into_par_iter()
        .map(|i| {
            let (d, j) = (i / nk, i % nk);
            let k = ds.grid.node(j);
            let phase = Complex64::from_polar(1.0, -k * ds.directions[d].project(ds.z0));
            let anchors = AnchorTriple::new(-taus[0] * phase, -taus[1] * phase, -taus[2] * phase)?;
            let dists = DistanceTriple::new(ds.magnitude(d, j, idx[0]), ds.magnitude(d, j, idx[1]), ds.magnitude(d, j, idx[2]))?;
            Ok(retrieve_point(&anchors, &dists))
        })
        .collect::<Result<Vec<_>>>()?;
    PhasedField::new(ds.grid, ds.directions.clone(), values)
}
