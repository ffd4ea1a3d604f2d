//! Spatial quadrature rules for `∫_D f(y) e^{-ik x̂·y} dy` over source shapes.
//!
//! Per-axis node counts follow `max(8, ⌈3·k·L·scale⌉)` for an axis of length
//! `L`. Rectangles use tensor Gauss-Legendre, discs a polar tensor rule,
//! polygons a signed fan of collapsed-square (Duffy) triangle rules from the
//! vertex centroid. A difference integrates the outer shape and subtracts
//! the clipped hole.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::Result;
use crate::scene::{Bindings, Expr, Point2, Shape};

pub const MIN_NODES: usize = 8;
pub const NODES_PER_UNIT_K: f64 = 3.0;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, cached by order.
pub fn gauss_legendre(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    type Rule = Arc<(Vec<f64>, Vec<f64>)>;
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&n) {
        return rule.clone();
    }
    let rule = Arc::new(compute_gauss_legendre(n));
    cache.lock().unwrap().insert(n, rule.clone());
    rule
}

// Newton iteration on P_n from the Chebyshev-like initial guess.
fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn_1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn_1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        // one more derivative evaluation at the converged node
        let (mut p0, mut p1) = (1.0, x);
        for j in 2..=n {
            let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
            p0 = p1;
            p1 = p2;
        }
        if n > 1 {
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Points with weights that already include the spatial profile and sign.
#[derive(Debug, Clone, Default)]
pub struct WeightedNodes {
    pub points: Vec<Point2>,
    pub weights: Vec<f64>,
}

impl WeightedNodes {
    /// `Σ |w_i|`, an upper bound for the modulus of any integral with this rule.
    pub fn mass(&self) -> f64 {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    fn push(&mut self, p: Point2, w: f64) {
        self.points.push(p);
        self.weights.push(w);
    }

    fn append(&mut self, other: WeightedNodes, sign: f64) {
        self.points.extend(other.points);
        self.weights.extend(other.weights.into_iter().map(|w| sign * w));
    }
}

pub fn axis_nodes(k: f64, length: f64, scale: f64) -> usize {
    let n = (NODES_PER_UNIT_K * k * length * scale).ceil();
    (n as usize).max(MIN_NODES)
}

fn mapped(n: usize, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let rule = gauss_legendre(n);
    let (half, mid) = (0.5 * (hi - lo), 0.5 * (hi + lo));
    rule.0.iter().zip(rule.1.iter()).map(|(x, w)| (mid + half * x, half * w)).collect()
}

/// Builds the weighted rule for `shape` with profile `f` at wavenumber `k`.
pub fn shape_rule(shape: &Shape, f: &Expr, k: f64, scale: f64) -> Result<WeightedNodes> {
    let mut out = WeightedNodes::default();
    add_shape(&mut out, shape, f, k, scale, 1.0)?;
    Ok(out)
}

fn add_shape(out: &mut WeightedNodes, shape: &Shape, f: &Expr, k: f64, scale: f64, sign: f64) -> Result<()> {
    let eval = |p: Point2| f.eval(&Bindings { x: p.x, y: p.y, k });
    match shape {
        Shape::Rectangle { x_lo, x_hi, y_lo, y_hi } => {
            let xs = mapped(axis_nodes(k, x_hi - x_lo, scale), *x_lo, *x_hi);
            let ys = mapped(axis_nodes(k, y_hi - y_lo, scale), *y_lo, *y_hi);
            for &(y, wy) in &ys {
                for &(x, wx) in &xs {
                    let p = Point2::new(x, y);
                    out.push(p, sign * wx * wy * eval(p)?);
                }
            }
        }
        Shape::Disc { center, radius } => {
            let rs = mapped(axis_nodes(k, *radius, scale), 0.0, *radius);
            // the angular integrand is periodic, so the trapezoid rule converges spectrally
            let nt = axis_nodes(k, TAU * radius, scale);
            let wt = TAU / nt as f64;
            for i in 0..nt {
                let (s, c) = (TAU * i as f64 / nt as f64).sin_cos();
                for &(r, wr) in &rs {
                    let p = Point2::new(center.x + r * c, center.y + r * s);
                    out.push(p, sign * wr * wt * r * eval(p)?);
                }
            }
        }
        Shape::Polygon { vertices } => {
            let n = vertices.len() as f64;
            let centroid = Point2::new(vertices.iter().map(|v| v.x).sum::<f64>() / n, vertices.iter().map(|v| v.y).sum::<f64>() / n);
            for (i, &b) in vertices.iter().enumerate() {
                let c = vertices[(i + 1) % vertices.len()];
                add_triangle(out, centroid, b, c, &eval, k, scale, sign)?;
            }
        }
        Shape::Difference { outer, hole } => {
            add_shape(out, outer, f, k, scale, sign)?;
            if let Some(cut) = outer.clip_hole(hole) {
                let mut inner = WeightedNodes::default();
                add_shape(&mut inner, &cut, f, k, scale, 1.0)?;
                out.append(inner, -sign);
            }
        }
    }
    Ok(())
}

// Collapsed square: p = a + u (b - a) + u v (c - b), Jacobian u · cross(b - a, c - b).
#[allow(clippy::too_many_arguments)]
fn add_triangle(
    out: &mut WeightedNodes,
    a: Point2,
    b: Point2,
    c: Point2,
    eval: &impl Fn(Point2) -> Result<f64, crate::scene::ExprError>,
    k: f64,
    scale: f64,
    sign: f64,
) -> Result<()> {
    let (ab, bc) = (b - a, c - b);
    let jac = ab.x * bc.y - ab.y * bc.x;
    if jac == 0.0 {
        return Ok(());
    }
    let longest = ab.norm().max(bc.norm()).max((a - c).norm());
    let n = axis_nodes(k, longest, scale);
    let us = mapped(n, 0.0, 1.0);
    for &(u, wu) in &us {
        for &(v, wv) in &us {
            let p = a + u * ab + (u * v) * bc;
            out.push(p, sign * wu * wv * u * jac * eval(p)?);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 8, 33, 120] {
            let rule = gauss_legendre(n);
            let total: f64 = rule.1.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n} weights sum {total}");
            let deg = 2 * n - 1;
            let integral: f64 = rule.0.iter().zip(rule.1.iter()).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((integral - exact).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn gauss_legendre_nodes_are_sorted_and_symmetric() {
        let rule = gauss_legendre(21);
        assert!(rule.0.windows(2).all(|w| w[0] < w[1]));
        for i in 0..21 {
            assert_eq!(rule.0[i], -rule.0[20 - i]);
        }
    }

    #[test]
    fn areas_from_unit_profile() {
        let one = Expr::constant(1.0);
        let shapes = [
            Shape::rectangle(1.0, 2.0, 1.0, 1.6).unwrap(),
            Shape::disc(Point2::new(-0.5, -0.5), 0.2).unwrap(),
            Shape::polygon(vec![Point2::new(-2.0, 0.0), Point2::new(1.0, 0.0), Point2::new(-0.5, 1.5 * 3f64.sqrt())]).unwrap(),
            Shape::polygon(vec![
                Point2::new(0.0, 0.0),
                Point2::new(3.0, 0.0),
                Point2::new(3.0, 1.0),
                Point2::new(1.0, 1.0),
                Point2::new(1.0, 3.0),
                Point2::new(0.0, 3.0),
            ])
            .unwrap(),
            Shape::difference(Shape::rectangle(0.0, 2.0, 0.0, 2.0).unwrap(), Shape::rectangle(1.0 / 16.0, 2.0, 1.0 / 16.0, 2.0).unwrap()).unwrap(),
        ];
        for s in &shapes {
            let rule = shape_rule(s, &one, 1.0, 1.0).unwrap();
            let a: f64 = rule.weights.iter().sum();
            assert!((a - s.area()).abs() < 1e-13 * s.area().max(1.0), "{s}: {a} vs {}", s.area());
        }
    }

    #[test]
    fn node_counts_follow_density() {
        assert_eq!(axis_nodes(0.5, 1.0, 1.0), MIN_NODES);
        assert_eq!(axis_nodes(19.5, 1.0, 1.0), 59);
        assert_eq!(axis_nodes(19.5, 1.0, 1.5), 88);
    }
}
