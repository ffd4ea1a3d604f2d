use std::fmt;

use super::geometry::{Direction, Point2};
use crate::error::{Error, Result};

/// Closed planar regions making up a source support.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Rectangle {
        x_lo: f64,
        x_hi: f64,
        y_lo: f64,
        y_hi: f64,
    },
    Disc {
        center: Point2,
        radius: f64,
    },
    /// Simple polygon, vertices in counterclockwise order.
    Polygon {
        vertices: Vec<Point2>,
    },
    /// Points of `outer` that are not interior to `hole`.
    Difference {
        outer: Box<Shape>,
        hole: Box<Shape>,
    },
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl Bounds {
    pub fn overlaps(&self, other: &Bounds) -> bool {
        self.x_lo <= other.x_hi && other.x_lo <= self.x_hi && self.y_lo <= other.y_hi && other.y_lo <= self.y_hi
    }

    pub fn union(&self, other: &Bounds) -> Bounds {
        Bounds { x_lo: self.x_lo.min(other.x_lo), x_hi: self.x_hi.max(other.x_hi), y_lo: self.y_lo.min(other.y_lo), y_hi: self.y_hi.max(other.y_hi) }
    }
}

impl Shape {
    pub fn rectangle(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Result<Shape> {
        let s = Shape::Rectangle { x_lo, x_hi, y_lo, y_hi };
        s.validate()?;
        Ok(s)
    }

    pub fn disc(center: Point2, radius: f64) -> Result<Shape> {
        let s = Shape::Disc { center, radius };
        s.validate()?;
        Ok(s)
    }

    pub fn polygon(vertices: Vec<Point2>) -> Result<Shape> {
        let s = Shape::Polygon { vertices };
        s.validate()?;
        Ok(s)
    }

    pub fn difference(outer: Shape, hole: Shape) -> Result<Shape> {
        let s = Shape::Difference { outer: Box::new(outer), hole: Box::new(hole) };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Geometry(msg));
        match self {
            Shape::Rectangle { x_lo, x_hi, y_lo, y_hi } => {
                if ![x_lo, x_hi, y_lo, y_hi].iter().all(|v| v.is_finite()) {
                    return bad("rectangle bounds must be finite".into());
                }
                if !(x_lo < x_hi && y_lo < y_hi) {
                    return bad(format!("rectangle needs x_lo < x_hi and y_lo < y_hi, got {self}"));
                }
            }
            Shape::Disc { center, radius } => {
                if !center.is_finite() || !radius.is_finite() || *radius <= 0.0 {
                    return bad(format!("disc needs a finite center and positive radius, got {self}"));
                }
            }
            Shape::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return bad("polygon needs at least 3 vertices".into());
                }
                if !vertices.iter().all(|v| v.is_finite()) {
                    return bad("polygon vertices must be finite".into());
                }
                if polygon_signed_area(vertices) <= 0.0 {
                    return bad("polygon vertices must be counterclockwise with positive area".into());
                }
                if polygon_self_intersects(vertices) {
                    return bad("polygon must not self-intersect".into());
                }
            }
            Shape::Difference { outer, hole } => {
                outer.validate()?;
                hole.validate()?;
                if !outer.bounds().overlaps(&hole.bounds()) {
                    return Ok(());
                }
                if !matches!((outer.as_ref(), hole.as_ref()), (Shape::Rectangle { .. }, Shape::Rectangle { .. })) {
                    // Integration subtracts the hole as a whole, so it must sit inside the outer shape.
                    if !hole.boundary_samples(64).iter().all(|p| outer.contains(*p)) {
                        return bad("difference hole must be a rectangle clipped by a rectangle, or lie inside the outer shape".into());
                    }
                }
            }
        }
        Ok(())
    }

    /// Closed-region membership.
    pub fn contains(&self, p: Point2) -> bool {
        match self {
            Shape::Rectangle { x_lo, x_hi, y_lo, y_hi } => p.x >= *x_lo && p.x <= *x_hi && p.y >= *y_lo && p.y <= *y_hi,
            Shape::Disc { center, radius } => {
                let (dx, dy) = (p.x - center.x, p.y - center.y);
                dx * dx + dy * dy <= radius * radius
            }
            Shape::Polygon { vertices } => on_polygon_boundary(vertices, p) || crossing_parity(vertices, p),
            Shape::Difference { outer, hole } => outer.contains(p) && !hole.contains_interior(p),
        }
    }

    /// Open-region membership.
    pub fn contains_interior(&self, p: Point2) -> bool {
        match self {
            Shape::Rectangle { x_lo, x_hi, y_lo, y_hi } => p.x > *x_lo && p.x < *x_hi && p.y > *y_lo && p.y < *y_hi,
            Shape::Disc { center, radius } => {
                let (dx, dy) = (p.x - center.x, p.y - center.y);
                dx * dx + dy * dy < radius * radius
            }
            Shape::Polygon { vertices } => !on_polygon_boundary(vertices, p) && crossing_parity(vertices, p),
            Shape::Difference { outer, hole } => outer.contains_interior(p) && !hole.contains(p),
        }
    }

    /// Exact range of `x̂ · z` over the shape.
    pub fn strip_hull(&self, d: &Direction) -> (f64, f64) {
        match self {
            Shape::Rectangle { x_lo, x_hi, y_lo, y_hi } => {
                let corners = [Point2::new(*x_lo, *y_lo), Point2::new(*x_hi, *y_lo), Point2::new(*x_hi, *y_hi), Point2::new(*x_lo, *y_hi)];
                projection_range(&corners, d)
            }
            Shape::Disc { center, radius } => {
                let c = d.project(*center);
                (c - radius, c + radius)
            }
            Shape::Polygon { vertices } => projection_range(vertices, d),
            Shape::Difference { outer, .. } => outer.strip_hull(d),
        }
    }

    pub fn bounds(&self) -> Bounds {
        match self {
            Shape::Rectangle { x_lo, x_hi, y_lo, y_hi } => Bounds { x_lo: *x_lo, x_hi: *x_hi, y_lo: *y_lo, y_hi: *y_hi },
            Shape::Disc { center, radius } => Bounds { x_lo: center.x - radius, x_hi: center.x + radius, y_lo: center.y - radius, y_hi: center.y + radius },
            Shape::Polygon { vertices } => {
                let mut b = Bounds { x_lo: f64::INFINITY, x_hi: f64::NEG_INFINITY, y_lo: f64::INFINITY, y_hi: f64::NEG_INFINITY };
                for v in vertices {
                    b.x_lo = b.x_lo.min(v.x);
                    b.x_hi = b.x_hi.max(v.x);
                    b.y_lo = b.y_lo.min(v.y);
                    b.y_hi = b.y_hi.max(v.y);
                }
                b
            }
            Shape::Difference { outer, .. } => outer.bounds(),
        }
    }

    pub fn translated(&self, h: Point2) -> Shape {
        match self {
            Shape::Rectangle { x_lo, x_hi, y_lo, y_hi } => Shape::Rectangle { x_lo: x_lo + h.x, x_hi: x_hi + h.x, y_lo: y_lo + h.y, y_hi: y_hi + h.y },
            Shape::Disc { center, radius } => Shape::Disc { center: *center + h, radius: *radius },
            Shape::Polygon { vertices } => Shape::Polygon { vertices: vertices.iter().map(|v| *v + h).collect() },
            Shape::Difference { outer, hole } => Shape::Difference { outer: Box::new(outer.translated(h)), hole: Box::new(hole.translated(h)) },
        }
    }

    /// Lebesgue measure of the region.
    pub fn area(&self) -> f64 {
        match self {
            Shape::Rectangle { x_lo, x_hi, y_lo, y_hi } => (x_hi - x_lo) * (y_hi - y_lo),
            Shape::Disc { radius, .. } => std::f64::consts::PI * radius * radius,
            Shape::Polygon { vertices } => polygon_signed_area(vertices),
            Shape::Difference { outer, hole } => match outer.clip_hole(hole) {
                Some(cut) => outer.area() - cut.area(),
                None => outer.area(),
            },
        }
    }

    /// The part of `hole` that has to be subtracted from `self` when
    /// integrating over `self ∖ hole`; `None` when they do not overlap.
    pub(crate) fn clip_hole(&self, hole: &Shape) -> Option<Shape> {
        if !self.bounds().overlaps(&hole.bounds()) {
            return None;
        }
        match (self, hole) {
            (Shape::Rectangle { x_lo, x_hi, y_lo, y_hi }, Shape::Rectangle { x_lo: a_lo, x_hi: a_hi, y_lo: b_lo, y_hi: b_hi }) => {
                let (cx_lo, cx_hi) = (x_lo.max(*a_lo), x_hi.min(*a_hi));
                let (cy_lo, cy_hi) = (y_lo.max(*b_lo), y_hi.min(*b_hi));
                (cx_lo < cx_hi && cy_lo < cy_hi).then_some(Shape::Rectangle { x_lo: cx_lo, x_hi: cx_hi, y_lo: cy_lo, y_hi: cy_hi })
            }
            _ => Some(hole.clone()),
        }
    }

    fn boundary_samples(&self, per_edge: usize) -> Vec<Point2> {
        let ring = |verts: &[Point2]| {
            let mut out = Vec::with_capacity(verts.len() * per_edge);
            for (i, a) in verts.iter().enumerate() {
                let b = verts[(i + 1) % verts.len()];
                for s in 0..per_edge {
                    let t = s as f64 / per_edge as f64;
                    out.push(Point2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
                }
            }
            out
        };
        match self {
            Shape::Rectangle { x_lo, x_hi, y_lo, y_hi } => {
                ring(&[Point2::new(*x_lo, *y_lo), Point2::new(*x_hi, *y_lo), Point2::new(*x_hi, *y_hi), Point2::new(*x_lo, *y_hi)])
            }
            Shape::Disc { center, radius } => (0..4 * per_edge)
                .map(|i| {
                    let t = std::f64::consts::TAU * i as f64 / (4 * per_edge) as f64;
                    Point2::new(center.x + radius * t.cos(), center.y + radius * t.sin())
                })
                .collect(),
            Shape::Polygon { vertices } => ring(vertices),
            Shape::Difference { outer, .. } => outer.boundary_samples(per_edge),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Rectangle { x_lo, x_hi, y_lo, y_hi } => write!(f, "rect({x_lo:?}, {x_hi:?}, {y_lo:?}, {y_hi:?})"),
            Shape::Disc { center, radius } => write!(f, "disc({:?}, {:?}, {radius:?})", center.x, center.y),
            Shape::Polygon { vertices } => {
                f.write_str("polygon(")?;
                for (i, v) in vertices.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "({:?}, {:?})", v.x, v.y)?;
                }
                f.write_str(")")
            }
            Shape::Difference { outer, hole } => write!(f, "difference({outer}, {hole})"),
        }
    }
}

fn projection_range(points: &[Point2], d: &Direction) -> (f64, f64) {
    points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        let s = d.project(*p);
        (lo.min(s), hi.max(s))
    })
}

pub(crate) fn polygon_signed_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
}

fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn on_segment(a: Point2, b: Point2, p: Point2) -> bool {
    cross(a, b, p) == 0.0 && p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

fn on_polygon_boundary(vertices: &[Point2], p: Point2) -> bool {
    let n = vertices.len();
    (0..n).any(|i| on_segment(vertices[i], vertices[(i + 1) % n], p))
}

/// Even-odd rule via a horizontal ray to +x.
fn crossing_parity(vertices: &[Point2], p: Point2) -> bool {
    let n = vertices.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x_cross {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let (d1, d2) = (cross(c, d, a), cross(c, d, b));
    let (d3, d4) = (cross(a, b, c), cross(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a)) || (d2 == 0.0 && on_segment(c, d, b)) || (d3 == 0.0 && on_segment(a, b, c)) || (d4 == 0.0 && on_segment(a, b, d))
}

fn polygon_self_intersects(vertices: &[Point2]) -> bool {
    let n = vertices.len();
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        for j in i + 1..n {
            // adjacent edges share a vertex
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (c, d) = (vertices[j], vertices[(j + 1) % n]);
            if segments_intersect(a, b, c, d) {
                return true;
            }
        }
    }
    false
}
