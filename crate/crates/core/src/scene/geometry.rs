use std::ops::{Add, Mul, Neg, Sub};

/// A point (or displacement) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Point reflection through `center`.
    pub fn reflect_through(self, center: Point2) -> Point2 {
        Point2::new(2.0 * center.x - self.x, 2.0 * center.y - self.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl Mul<Point2> for f64 {
    type Output = Point2;
    fn mul(self, rhs: Point2) -> Point2 {
        Point2::new(self * rhs.x, self * rhs.y)
    }
}

/// An observation direction on the unit circle, stored by its polar angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    angle: f64,
    unit: Point2,
}

impl Direction {
    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { angle, unit: Point2::new(c, s) }
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// The unit vector `(cos angle, sin angle)`.
    pub fn unit(&self) -> Point2 {
        self.unit
    }

    /// The unit vector rotated a quarter turn counterclockwise.
    pub fn perp(&self) -> Point2 {
        Point2::new(-self.unit.y, self.unit.x)
    }

    pub fn opposite(&self) -> Direction {
        Direction { angle: self.angle + std::f64::consts::PI, unit: -self.unit }
    }

    /// Projection `x̂ · p`.
    pub fn project(&self, p: Point2) -> f64 {
        self.unit.dot(p)
    }
}

/// `count` directions `start + j (end - start) / count`, `j = 1..=count`.
pub fn arc_directions(count: usize, start: f64, end: f64) -> Vec<Direction> {
    let step = (end - start) / count as f64;
    (1..=count).map(|j| Direction::from_angle(start + j as f64 * step)).collect()
}
