use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use phaseless::forward::{far_field, far_fields_at, WaveNumberGrid};
use phaseless::scene::{arc_directions, Direction, Expr, Point2, Shape, SourceModel};

fn model(shape: Shape, f: &str) -> SourceModel {
    SourceModel::single(shape, Expr::parse(f).unwrap(), Expr::constant(1.0)).unwrap()
}

/// `J1(x) = (1/π) ∫_0^π cos(t − x sin t) dt`; the integrand extends to a
/// smooth periodic function, so the trapezoid rule converges geometrically.
fn bessel_j1(x: f64) -> f64 {
    let n = 4000;
    let h = PI / n as f64;
    let mut s = 0.5 * ((0.0f64).cos() + (PI - x * PI.sin()).cos());
    for i in 1..n {
        let t = i as f64 * h;
        s += (t - x * t.sin()).cos();
    }
    s * h / PI
}

/// `∫_a^b t^n e^{-ict} dt` by repeated integration by parts (`c` away from 0).
fn moment(a: f64, b: f64, c: f64, n: u32) -> Complex64 {
    let i = Complex64::i();
    let e = |t: f64| Complex64::from_polar(1.0, -c * t);
    let mut acc = (e(b) - e(a)) / (-i * c);
    for m in 1..=n {
        let edge = (b.powi(m as i32) * e(b) - a.powi(m as i32) * e(a)) / (-i * c);
        acc = edge + (m as f64 / (i * c)) * acc;
    }
    acc
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn disc_matches_bessel_oracle() {
    let center = Point2::new(-0.5, 0.7);
    for radius in [0.2, 1.0] {
        let m = model(Shape::disc(center, radius).unwrap(), "3");
        for k in [0.5, 4.5, 11.5, 19.5] {
            for angle in [-1.2, 0.0, 0.9] {
                let d = Direction::from_angle(angle);
                let exact = 3.0 * 2.0 * PI * radius * bessel_j1(k * radius) / k * Complex64::from_polar(1.0, -k * d.project(center));
                let got = far_field(&m, &d, k).unwrap();
                assert!(rel(got, exact) < 1e-9, "r={radius} k={k} θ={angle}: {got} vs {exact}");
            }
        }
    }
}

#[test]
fn quadratic_profile_matches_moments() {
    let m = model(Shape::rectangle(1.0, 2.0, 1.0, 1.6).unwrap(), "x^2 - y^2 + 5");
    for k in [0.5, 7.5, 19.5] {
        for angle in [-1.0, -0.5, 0.4, 1.1] {
            let d = Direction::from_angle(angle);
            let (cx, cy) = (k * d.unit().x, k * d.unit().y);
            let exact = moment(1.0, 2.0, cx, 2) * moment(1.0, 1.6, cy, 0) - moment(1.0, 2.0, cx, 0) * moment(1.0, 1.6, cy, 2)
                + 5.0 * moment(1.0, 2.0, cx, 0) * moment(1.0, 1.6, cy, 0);
            let got = far_field(&m, &d, k).unwrap();
            assert!(rel(got, exact) < 1e-9, "k={k} θ={angle}: {got} vs {exact}");
        }
    }
}

#[test]
fn polygon_rectangle_agrees_with_tensor_rule() {
    let rect = model(Shape::rectangle(1.0, 2.0, 1.0, 1.6).unwrap(), "x - 2*y + 1");
    let vertices = [(1.0, 1.0), (2.0, 1.0), (2.0, 1.6), (1.0, 1.6)].map(|(x, y)| Point2::new(x, y)).to_vec();
    let poly = model(Shape::polygon(vertices).unwrap(), "x - 2*y + 1");
    for k in [0.5, 9.5, 19.5] {
        for d in arc_directions(7, -FRAC_PI_2, FRAC_PI_2) {
            let (a, b) = (far_field(&rect, &d, k).unwrap(), far_field(&poly, &d, k).unwrap());
            assert!((a - b).norm() <= 1e-10 * a.norm().max(1.0), "k={k}: {a} vs {b}");
        }
    }
}

#[test]
fn l_shape_equals_sum_of_arms() {
    let w = 1.0 / 16.0;
    let l = model(Shape::difference(Shape::rectangle(0.0, 2.0, 0.0, 2.0).unwrap(), Shape::rectangle(w, 2.0, w, 2.0).unwrap()).unwrap(), "5");
    let bottom = model(Shape::rectangle(w, 2.0, 0.0, w).unwrap(), "5");
    let left = model(Shape::rectangle(0.0, w, 0.0, 2.0).unwrap(), "5");
    for k in [0.5, 10.5, 19.5] {
        for d in arc_directions(5, -FRAC_PI_2, FRAC_PI_2) {
            let sum = far_field(&left, &d, k).unwrap() + far_field(&bottom, &d, k).unwrap();
            let got = far_field(&l, &d, k).unwrap();
            assert!((got - sum).norm() <= 1e-10 * sum.norm().max(1.0), "k={k}: {got} vs {sum}");
        }
    }
}

#[test]
fn real_sources_have_conjugate_symmetric_far_fields() {
    let shapes = [
        Shape::rectangle(1.0, 2.0, 1.0, 1.6).unwrap(),
        Shape::disc(Point2::new(-0.5, -0.5), 0.2).unwrap(),
        Shape::polygon(vec![Point2::new(-2.0, 0.0), Point2::new(1.0, 0.0), Point2::new(-0.5, 2.598076211353316)]).unwrap(),
    ];
    let grid = WaveNumberGrid::new(0.5, 20.0, 20).unwrap();
    for shape in shapes {
        let m = model(shape, "x^2 - y^2 + 5");
        let dirs = arc_directions(6, -FRAC_PI_2, FRAC_PI_2);
        let opposite: Vec<Direction> = dirs.iter().map(|d| d.opposite()).collect();
        for k in grid.nodes() {
            let a = far_fields_at(&m, k, &dirs).unwrap();
            let b = far_fields_at(&m, k, &opposite).unwrap();
            for (u, v) in a.iter().zip(&b) {
                assert!((u - v.conj()).norm() <= 1e-12 * u.norm().max(1.0), "k={k}: {u} vs {v}");
            }
        }
    }
}

#[test]
fn frequency_profile_scales_the_field() {
    let plain = model(Shape::rectangle(1.0, 2.0, 1.0, 1.6).unwrap(), "5");
    let weighted = SourceModel::single(Shape::rectangle(1.0, 2.0, 1.0, 1.6).unwrap(), Expr::constant(5.0), Expr::parse("k^2 + 1").unwrap()).unwrap();
    let d = Direction::from_angle(0.3);
    for k in [0.5, 3.5, 12.5] {
        let a = far_field(&plain, &d, k).unwrap() * (k * k + 1.0);
        let b = far_field(&weighted, &d, k).unwrap();
        assert!((a - b).norm() <= 1e-13 * a.norm());
    }
}
