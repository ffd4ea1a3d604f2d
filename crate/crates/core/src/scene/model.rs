use num_complex::Complex64;

use super::expr::{Bindings, Expr, Var};
use super::geometry::{Direction, Point2};
use super::shape::Shape;
use crate::error::{Error, Result};

/// One connected piece of the support with its spatial profile `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub shape: Shape,
    pub profile: Expr,
}

/// A separable source `S(y, k) = c · f_m(y) · g(k)` on a union of disjoint
/// shapes, where `c` is a global complex constant (1 unless rotated).
#[derive(Debug, Clone, PartialEq)]
pub struct SourceModel {
    components: Vec<Component>,
    frequency_profile: Expr,
    scale: Complex64,
}

impl SourceModel {
    pub fn new(components: Vec<Component>, frequency_profile: Expr) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Geometry("source model needs at least one component".into()));
        }
        frequency_profile.check_variables(&[Var::K])?;
        for c in &components {
            c.shape.validate()?;
            c.profile.check_variables(&[Var::X, Var::Y])?;
        }
        for (i, a) in components.iter().enumerate() {
            for (j, b) in components.iter().enumerate().skip(i + 1) {
                if a.shape.bounds().overlaps(&b.shape.bounds()) {
                    return Err(Error::Geometry(format!("components {i} and {j} are not well separated (bounding boxes overlap)")));
                }
            }
        }
        Ok(Self { components, frequency_profile, scale: Complex64::new(1.0, 0.0) })
    }

    /// Single-component convenience constructor.
    pub fn single(shape: Shape, profile: Expr, frequency_profile: Expr) -> Result<Self> {
        Self::new(vec![Component { shape, profile }], frequency_profile)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn frequency_profile(&self) -> &Expr {
        &self.frequency_profile
    }

    pub fn scale(&self) -> Complex64 {
        self.scale
    }

    /// The same source multiplied by a complex constant.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self { scale: self.scale * factor, ..self.clone() }
    }

    /// The source `S(y - h, k)`, supported on the shifted shapes.
    pub fn translated(&self, h: Point2) -> Self {
        let components = self.components.iter().map(|c| Component { shape: c.shape.translated(h), profile: c.profile.shifted(h.x, h.y) }).collect();
        Self { components, ..self.clone() }
    }

    pub fn frequency_factor(&self, k: f64) -> Result<Complex64> {
        let g = self.frequency_profile.eval(&Bindings { k, ..Default::default() })?;
        Ok(self.scale * g)
    }

    /// Index of the component whose closed shape contains `p`.
    pub fn component_at(&self, p: Point2) -> Option<usize> {
        self.components.iter().position(|c| c.shape.contains(p))
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.component_at(p).is_some()
    }

    /// `S(p, k)`; zero off the support.
    pub fn eval_source(&self, p: Point2, k: f64) -> Result<Complex64> {
        if !(k > 0.0) {
            return Err(Error::Precondition(format!("wavenumber must be positive, got {k}")));
        }
        match self.component_at(p) {
            Some(m) => {
                let f = self.components[m].profile.eval(&Bindings { x: p.x, y: p.y, k })?;
                Ok(self.frequency_factor(k)? * f)
            }
            None => Ok(Complex64::new(0.0, 0.0)),
        }
    }

    /// Smallest slab `lo ≤ x̂·z ≤ hi` containing the support.
    pub fn strip_hull(&self, d: &Direction) -> (f64, f64) {
        self.components.iter().map(|c| c.shape.strip_hull(d)).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (a, b)| (lo.min(a), hi.max(b)))
    }

    /// Euclidean distance from `p` to the closed support, zero inside.
    /// Exact for rectangles, discs and polygons; differences use the outer shape
    /// unless `p` sits in the hole, where the hole boundary is sampled.
    pub fn distance_to_support(&self, p: Point2) -> f64 {
        self.components.iter().map(|c| shape_distance(&c.shape, p)).fold(f64::INFINITY, f64::min)
    }
}

fn segment_distance(a: Point2, b: Point2, p: Point2) -> f64 {
    let ab = b - a;
    let t = ((p - a).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0);
    p.distance(a + t * ab)
}

fn shape_distance(shape: &Shape, p: Point2) -> f64 {
    if shape.contains(p) {
        return 0.0;
    }
    match shape {
        Shape::Rectangle { x_lo, x_hi, y_lo, y_hi } => {
            let dx = (x_lo - p.x).max(0.0).max(p.x - x_hi);
            let dy = (y_lo - p.y).max(0.0).max(p.y - y_hi);
            dx.hypot(dy)
        }
        Shape::Disc { center, radius } => (p.distance(*center) - radius).max(0.0),
        Shape::Polygon { vertices } => {
            let n = vertices.len();
            (0..n).map(|i| segment_distance(vertices[i], vertices[(i + 1) % n], p)).fold(f64::INFINITY, f64::min)
        }
        Shape::Difference { outer, hole } => {
            let d_outer = shape_distance(outer, p);
            if d_outer > 0.0 {
                return d_outer;
            }
            // p lies in the hole: nearest point of the outer region outside the hole
            match hole.as_ref() {
                Shape::Rectangle { x_lo, x_hi, y_lo, y_hi } => {
                    let candidates = [p.x - x_lo, x_hi - p.x, p.y - y_lo, y_hi - p.y];
                    let outer_bounds = outer.bounds();
                    let usable = [x_lo > &outer_bounds.x_lo, x_hi < &outer_bounds.x_hi, y_lo > &outer_bounds.y_lo, y_hi < &outer_bounds.y_hi];
                    candidates.iter().zip(usable).filter(|(_, u)| *u).map(|(c, _)| *c).fold(f64::INFINITY, f64::min)
                }
                Shape::Disc { center, radius } => radius - p.distance(*center),
                Shape::Polygon { vertices } => {
                    let n = vertices.len();
                    (0..n).map(|i| segment_distance(vertices[i], vertices[(i + 1) % n], p)).fold(f64::INFINITY, f64::min)
                }
                Shape::Difference { .. } => shape_distance(hole, p),
            }
        }
    }
}

/// A monopole at `z0` with complex strength `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceSource {
    pub z0: Point2,
    pub tau: Complex64,
}

impl ReferenceSource {
    /// Fails when `z0` touches the source support.
    pub fn new(model: &SourceModel, z0: Point2, tau: Complex64) -> Result<Self> {
        Self::check_outside(model, z0)?;
        Ok(Self { z0, tau })
    }

    pub fn check_outside(model: &SourceModel, z0: Point2) -> Result<()> {
        if !z0.is_finite() {
            return Err(Error::Precondition("reference point must be finite".into()));
        }
        if model.contains(z0) {
            return Err(Error::Precondition(format!("reference point ({}, {}) lies inside the source support", z0.x, z0.y)));
        }
        Ok(())
    }
}
