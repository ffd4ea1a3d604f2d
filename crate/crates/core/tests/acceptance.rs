//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.
//!
//! Runs without the libtest harness so that the report is always printed.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use phaseless::cli::{parse_config, run, ScenarioConfig};
use phaseless::forward::{far_fields_at, synthesize, Dataset, WaveNumberGrid};
use phaseless::phase_retrieval::{retrieve_point, AnchorTriple, DistanceTriple};
use phaseless::sampling::{evaluate_on_grid, Indicator, PhaselessIndicator, SamplingGrid};
use phaseless::scene::{arc_directions, Direction, Expr, Point2, Shape, SourceModel};

// Tolerances and sizes, pinned.
const EXACT_TOL: f64 = 1e-9;
const EXACT_TRIALS: usize = 10_000;
const EXACT_BUDGET_S: f64 = 1.0;
const LIPSCHITZ_TRIALS: usize = 1_000;
const LIPSCHITZ_SLACK: f64 = 1.5;
const ORACLE_TOL: f64 = 1e-8;
const INVARIANCE_TOL: f64 = 1e-12;
const INVARIANCE_TRIALS: usize = 100;
const END_TO_END_TOL: f64 = 1e-10;
const NOISY_FACTOR: f64 = 1.0;
const IDENTITY_TOL: f64 = 1e-12;
const IDENTITY_POINTS: usize = 1_000;
const NMS_RADIUS: f64 = 1.0;
const TIME_BUDGET_S: f64 = 60.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn fixture(name: &str) -> ScenarioConfig {
    let path = format!("{}/fixtures/{name}.cfg", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    parse_config(&text).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn rectangle() -> SourceModel {
    SourceModel::single(Shape::rectangle(1.0, 2.0, 1.0, 1.6).unwrap(), Expr::constant(5.0), Expr::constant(1.0)).unwrap()
}

fn paper_grid() -> WaveNumberGrid {
    WaveNumberGrid::new(0.5, 20.0, 20).unwrap()
}

fn paper_directions() -> Vec<Direction> {
    arc_directions(20, -FRAC_PI_2, FRAC_PI_2)
}

fn resolution() -> f64 {
    TAU / paper_grid().k_max()
}

fn exact_recovery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut pt = || c(rng.gen_range(-1e3..1e3), rng.gen_range(-1e3..1e3));
    let started = Instant::now();
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < EXACT_TRIALS {
        let (z, z1, z2, z3) = (pt(), pt(), pt(), pt());
        let Ok(anchors) = AnchorTriple::new(z1, z2, z3) else { continue };
        worst = worst.max((retrieve_point(&anchors, &anchors.distances_to(z)) - z).norm());
        done += 1;
    }
    let secs = started.elapsed().as_secs_f64();
    outcome(
        worst <= EXACT_TOL && secs < EXACT_BUDGET_S,
        format!("{EXACT_TRIALS} noiseless instances, worst |error| {worst:.2e} (≤ {EXACT_TOL:.0e}), {secs:.3} s (< {EXACT_BUDGET_S} s)"),
    )
}

fn lipschitz_stability() -> Outcome {
    let anchors = AnchorTriple::new(c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0)).unwrap();
    let z = c(3.0, 4.0);
    let exact = anchors.distances_to(z).0;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut max_error = |eps: f64| {
        (0..LIPSCHITZ_TRIALS)
            .map(|_| {
                let r = exact.map(|v| (v + eps * rng.gen_range(-1.0..1.0)).max(0.0));
                (retrieve_point(&anchors, &DistanceTriple(r)) - z).norm()
            })
            .fold(0.0, f64::max)
    };
    let constant = max_error(1e-2) / 1e-2;
    let mut pass = constant.is_finite();
    let mut parts = vec![format!("C = {constant:.3}")];
    for eps in [1e-3, 1e-4] {
        let e = max_error(eps);
        pass &= e <= LIPSCHITZ_SLACK * constant * eps;
        parts.push(format!("ε={eps:.0e}: {e:.2e} ≤ {:.2e}", LIPSCHITZ_SLACK * constant * eps));
    }
    outcome(pass, parts.join(", "))
}

/// `∫ e^{-ik u t} dt` over `[a, b]`.
fn exp_integral(a: f64, b: f64, ku: f64) -> Complex64 {
    if (ku * (b - a)).abs() < 1e-6 {
        return (b - a) * Complex64::from_polar(1.0, -ku * 0.5 * (a + b));
    }
    (Complex64::from_polar(1.0, -ku * a) - Complex64::from_polar(1.0, -ku * b)) / c(0.0, ku)
}

fn forward_oracle() -> Outcome {
    let model = rectangle();
    let dirs = paper_directions();
    let mut worst = 0.0f64;
    for k in paper_grid().nodes() {
        let got = far_fields_at(&model, k, &dirs).unwrap();
        for (d, v) in dirs.iter().zip(got) {
            let u = d.unit();
            let exact = 5.0 * exp_integral(1.0, 2.0, k * u.x) * exp_integral(1.0, 1.6, k * u.y);
            worst = worst.max((v - exact).norm() / exact.norm());
        }
    }
    outcome(worst <= ORACLE_TOL, format!("rectangle, 20×20 lattice, worst relative error {worst:.2e} (≤ {ORACLE_TOL:.0e})"))
}

fn max_relative_gap(a: &Dataset, b: &Dataset) -> f64 {
    a.phaseless
        .iter()
        .zip(&b.phaseless)
        .map(|(x, y)| (x.magnitude - y.magnitude).abs() / x.magnitude.abs().max(y.magnitude.abs()).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

fn invariance() -> Outcome {
    let model = SourceModel::single(Shape::rectangle(1.0, 2.0, 1.0, 1.6).unwrap(), Expr::parse("x^2 - y^2 + 5").unwrap(), Expr::constant(1.0)).unwrap();
    let (grid, dirs) = (paper_grid(), paper_directions());
    let z0 = Point2::new(4.0, 4.0);
    let taus = [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0)];
    let base = synthesize(&model, z0, &taus, &dirs, &grid).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut shift, mut phase) = (0.0f64, 0.0f64);
    for _ in 0..INVARIANCE_TRIALS {
        let h = Point2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let moved = synthesize(&model.translated(h), z0 + h, &taus, &dirs, &grid).unwrap();
        shift = shift.max(max_relative_gap(&base, &moved));
        let rot = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
        let rotated = synthesize(&model.scaled(rot), z0, &taus.map(|t| t * rot), &dirs, &grid).unwrap();
        phase = phase.max(max_relative_gap(&base, &rotated));
    }
    outcome(
        shift <= INVARIANCE_TOL && phase <= INVARIANCE_TOL,
        format!("{INVARIANCE_TRIALS} shifts: {shift:.2e}, {INVARIANCE_TRIALS} phases: {phase:.2e} (≤ {INVARIANCE_TOL:.0e})"),
    )
}

fn end_to_end() -> Outcome {
    let mut cfg = fixture("rect-s5");
    cfg.mode = phaseless::cli::Mode::Retrieve;
    let out = run(&cfg, None).unwrap();
    let truth = out.datasets[0].phased.as_ref().unwrap();
    let got = out.retrieved.as_ref().unwrap();
    let worst = truth.values().iter().zip(got.values()).map(|(t, r)| (r - t).norm() / t.norm()).fold(0.0, f64::max);
    outcome(worst <= END_TO_END_TOL, format!("Scheme Two retrieval, 400 lattice points, worst pointwise relative error {worst:.2e} (≤ {END_TO_END_TOL:.0e})"))
}

fn noisy_retrieval() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, level) in [("retrieve-rel-10", 0.1), ("retrieve-rel-20", 0.2), ("retrieve-rel-30", 0.3)] {
        let cfg = fixture(name);
        let clean = {
            let mut c = cfg.clone();
            c.noise.kind = phaseless::forward::NoiseKind::None;
            run(&c, None).unwrap()
        };
        let noisy = run(&cfg, None).unwrap();
        let ds = &noisy.datasets[0];
        let d = ds.directions.iter().position(|d| d.angle().abs() < 1e-12).expect("x̂ = (1, 0) is observed");
        let truth = ds.phased.as_ref().unwrap().slice(d);
        let got = noisy.retrieved.as_ref().unwrap().slice(d);
        let n = truth.len() as f64;
        let rms_dev = (truth.iter().zip(got).map(|(t, r)| (r.re - t.re).powi(2)).sum::<f64>() / n).sqrt();
        // injected relative perturbation δe and the clean magnitudes along x̂ = (1, 0)
        let (mut sq, mut count, mut peak) = (0.0, 0.0, 0.0f64);
        for j in 0..ds.grid.len() {
            for t in 0..ds.taus.len() {
                let m = clean.datasets[0].magnitude(d, j, t);
                let rel = (ds.magnitude(d, j, t) - m) / m;
                sq += rel * rel;
                count += 1.0;
                peak = peak.max(m);
            }
        }
        let bound = NOISY_FACTOR * (sq / count).sqrt() * peak;
        pass &= rms_dev <= bound;
        parts.push(format!("δ={level}: {rms_dev:.3} ≤ {bound:.3}"));
    }
    outcome(pass, format!("RMS |Re u_retrieved − Re u| at x̂=(1,0): {}", parts.join(", ")))
}

fn indicator_identities() -> Outcome {
    let mut cfg = fixture("rec3");
    cfg.z0s = vec![Point2::new(4.0, 4.0)];
    let out = run(
        &{
            let mut c = cfg.clone();
            c.mode = phaseless::cli::Mode::Forward;
            c
        },
        None,
    )
    .unwrap();
    let ds = &out.datasets[0];
    let tau1 = cfg.indicator_tau().unwrap();
    let all = PhaselessIndicator::from_dataset(ds, tau1).unwrap();
    let x_axis = Direction::from_angle(ds.directions.iter().map(|d| d.angle()).find(|a| a.abs() < 1e-12).unwrap());
    let single = PhaselessIndicator::new(ds, &[x_axis], tau1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    let (mut mirror, mut strip) = (0.0f64, 0.0f64);
    for _ in 0..IDENTITY_POINTS {
        let z = Point2::new(rng.gen_range(-2.0..4.0), rng.gen_range(-2.0..4.0));
        mirror = mirror.max(rel(all.value(z), all.value(z.reflect_through(ds.z0))));
        let t = rng.gen_range(-5.0..5.0);
        strip = strip.max(rel(single.value(z), single.value(z + t * x_axis.perp())));
    }
    outcome(
        mirror <= IDENTITY_TOL && strip <= IDENTITY_TOL,
        format!("{IDENTITY_POINTS} points: mirror about z0 {mirror:.2e}, strip invariance {strip:.2e} (≤ {IDENTITY_TOL:.0e})"),
    )
}

/// Returns the criterion outcome and the timed 200×200 evaluation in seconds.
fn localization() -> (Outcome, f64) {
    let model = rectangle();
    let (grid, dirs) = (paper_grid(), paper_directions());
    let taus = [c(0.0, 0.0), c(1.0, 0.0)];
    let sampling = SamplingGrid::new(-2.0, 4.0, -2.0, 4.0, 200, 200).unwrap();
    let tol = resolution();
    let mut pass = true;
    let mut parts = Vec::new();

    let z0 = Point2::new(12.0, 12.0);
    let ds = synthesize(&model, z0, &taus, &dirs, &grid).unwrap();
    let started = Instant::now();
    let field = evaluate_on_grid(&PhaselessIndicator::from_dataset(&ds, taus[1]).unwrap(), &sampling);
    let secs = started.elapsed().as_secs_f64();
    let (p, _) = field.argmax_where(|z| z.norm() < z.distance(z0)).unwrap();
    let dist = model.distance_to_support(p);
    pass &= dist <= tol;
    parts.push(format!("(a) 20 directions argmax ({:.3}, {:.3}) at distance {dist:.3}", p.x, p.y));

    let x_axis = Direction::from_angle(0.0);
    let (lo, hi) = model.strip_hull(&x_axis);
    for z0 in [Point2::new(1.5, 4.0), Point2::new(4.0, 4.0), Point2::new(12.0, 12.0)] {
        let ds = synthesize(&model, z0, &taus, &[x_axis], &grid).unwrap();
        let field = evaluate_on_grid(&PhaselessIndicator::from_dataset(&ds, taus[1]).unwrap(), &sampling);
        let s = x_axis.project(field.argmax().0);
        let ok = s >= lo - tol && s <= hi + tol;
        pass &= ok;
        let mut note = format!("(b) z0=({}, {}) projection {s:.3}", z0.x, z0.y);
        if !ok {
            // i1 is even about z0 and 2π/Δk-periodic along x̂, so name the image of a miss
            let period = TAU / grid.step();
            let image = 2.0 * x_axis.project(z0) - s;
            let folded = image - period * ((image - 0.5 * (lo + hi)) / period).round();
            note.push_str(&format!(" [mirror image folded by 2π/Δk: {folded:.3}]"));
        }
        parts.push(note);
    }
    (outcome(pass, format!("{}; tolerance 2π/k_max = {tol:.3}, strip [{lo}, {hi}]", parts.join(", "))), secs)
}

const SCHEME_TWO: &str = "\
name = extended
mode = full-scheme-two
[source]
g = G
COMPONENTS
[wavenumbers]
k_min = 0.5
k_max = 20
count = 20
[directions]
count = 20
start = -pi/2
end = pi/2
[reference]
z0 = (4, 4)
tau = 1, -1, i
[noise]
kind = relative
level = LEVEL
seed = 9
[sampling]
x_lo = -3
x_hi = 3
y_lo = -2
y_hi = 4
nx = 121
ny = 121
";

fn scheme_two_localization() -> Outcome {
    let cases = [
        ("triangle", "1", "[component]\nshape = polygon((-2, 0), (1, 0), (-0.5, 2.598076211353316))\nf = 5"),
        ("slab", "1", "[component]\nshape = rect(-2, 2, 0, 0.1)\nf = 5"),
        ("two-component", "k", "[component]\nshape = rect(1, 1.6, 1, 1.4)\nf = x^2 - y^2 + 5\n[component]\nshape = disc(-0.5, -0.5, 0.2)\nf = x^2 - y^2 + 5"),
        ("L-shape", "1", "[component]\nshape = difference(rect(0, 2, 0, 2), rect(1/16, 2, 1/16, 2))\nf = 5"),
    ];
    let tol = resolution();
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, g, comps) in cases {
        for level in ["0", "0.1"] {
            let text = SCHEME_TWO.replace("G", g).replace("COMPONENTS", comps).replace("LEVEL", level);
            let cfg = parse_config(&text).unwrap();
            let model = cfg.model().unwrap();
            let out = run(&cfg, None).unwrap();
            let field = &out.fields[0];
            let (p, _) = field.argmax();
            let mut dist = model.distance_to_support(p);
            let mut note = format!("{name} δ={level}: {dist:.3}");
            if model.components().len() == 2 {
                // one of the two strongest separated peaks must sit on each component
                let peaks = field.peaks(NMS_RADIUS);
                let near = |i: usize| peaks.iter().take(2).map(|(q, _)| dist_to(&model, i, *q)).fold(f64::INFINITY, f64::min);
                let per = [near(0), near(1)];
                dist = dist.max(per[0]).max(per[1]);
                note = format!("{name} δ={level}: argmax {:.3}, peaks {:.3}/{:.3}", model.distance_to_support(p), per[0], per[1]);
            }
            pass &= dist <= tol;
            parts.push(note);
        }
    }
    outcome(pass, format!("distance of i2 maxima to support (≤ {tol:.3}): {}", parts.join(", ")))
}

fn dist_to(model: &SourceModel, component: usize, p: Point2) -> f64 {
    let c = &model.components()[component];
    SourceModel::single(c.shape.clone(), c.profile.clone(), Expr::constant(1.0)).unwrap().distance_to_support(p)
}

fn main() {
    let started = Instant::now();
    let mut report: Vec<(u32, &str, Outcome)> = vec![
        (1, "phase retrieval exactness", exact_recovery()),
        (2, "Lipschitz stability", lipschitz_stability()),
        (3, "forward oracle", forward_oracle()),
        (4, "translation/rotation invariance", invariance()),
        (5, "noiseless end-to-end retrieval", end_to_end()),
        (6, "noisy retrieval tracks truth", noisy_retrieval()),
        (7, "indicator identities", indicator_identities()),
    ];
    let (loc, secs) = localization();
    report.push((8, "localization", loc));
    report.push((9, "Scheme Two localization of extended sources", scheme_two_localization()));
    let total = started.elapsed().as_secs_f64();
    report.push((
        10,
        "performance",
        outcome(secs <= TIME_BUDGET_S, format!("200×200 i1 with 20 directions × 20 wavenumbers in {secs:.2} s (≤ {TIME_BUDGET_S} s); suite {total:.1} s")),
    ));

    let mut failed = 0;
    for (n, name, o) in &report {
        println!("{} criterion {n:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", report.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
