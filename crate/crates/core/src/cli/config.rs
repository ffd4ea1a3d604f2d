//! Scenario files: `key = value` lines grouped under `[section]` headers.
//!
//! ```text
//! name = rect-s5
//! mode = full-scheme-two
//!
//! [source]
//! g = 1
//!
//! [component]            # repeat for every piece of the support
//! shape = rect(1, 2, 1, 1.6)
//! f = 5
//!
//! [wavenumbers]
//! k_min = 0.5
//! k_max = 20
//! count = 20
//!
//! [directions]           # either `angles = a, b, ...` or count/start/end
//! count = 20
//! start = -pi/2
//! end = pi/2
//!
//! [reference]
//! z0 = (4, 4)            # several points separated by `;`
//! tau = 1, -1, i
//!
//! [noise]
//! kind = relative        # none | relative | absolute
//! level = 0.1
//! seed = 7
//!
//! [sampling]
//! x_lo = -2
//! x_hi = 4
//! y_lo = -2
//! y_hi = 4
//! nx = 200
//! ny = 200
//!
//! [output]
//! dir = out/rect-s5
//! ```
//!
//! Numbers accept constant arithmetic (`1/16`, `-pi/2`). Shapes are
//! `rect(x_lo, x_hi, y_lo, y_hi)`, `disc(cx, cy, r)`,
//! `polygon((x, y), ...)` and `difference(outer, hole)`.

use std::collections::hash_map::Entry as Entry_;
use std::collections::HashMap;
use std::fmt::{self, Write as _};

use num_complex::Complex64;

use crate::error::{ConfigError, ConfigErrors};
use crate::forward::{NoiseKind, WaveNumberGrid};
use crate::phase_retrieval::check_strengths;
use crate::sampling::SamplingGrid;
use crate::scene::{arc_directions, Component, Direction, Expr, Point2, ReferenceSource, Shape, SourceModel, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Forward,
    Retrieve,
    SampleI1,
    SampleI2,
    FullSchemeOne,
    FullSchemeTwo,
}

impl Mode {
    pub const ALL: [Mode; 6] = [Mode::Forward, Mode::Retrieve, Mode::SampleI1, Mode::SampleI2, Mode::FullSchemeOne, Mode::FullSchemeTwo];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Forward => "forward",
            Mode::Retrieve => "retrieve",
            Mode::SampleI1 => "sample-i1",
            Mode::SampleI2 => "sample-i2",
            Mode::FullSchemeOne => "full-scheme-one",
            Mode::FullSchemeTwo => "full-scheme-two",
        }
    }

    fn parse(s: &str) -> Option<Mode> {
        Mode::ALL.into_iter().find(|m| m.name() == s)
    }

    fn needs_sampling(self) -> bool {
        matches!(self, Mode::SampleI1 | Mode::SampleI2 | Mode::FullSchemeOne | Mode::FullSchemeTwo)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DirectionSpec {
    Angles(Vec<f64>),
    Arc { count: usize, start: f64, end: f64 },
}

impl DirectionSpec {
    pub fn directions(&self) -> Vec<Direction> {
        match self {
            DirectionSpec::Angles(a) => a.iter().map(|t| Direction::from_angle(*t)).collect(),
            DirectionSpec::Arc { count, start, end } => arc_directions(*count, *start, *end),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub level: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub mode: Mode,
    pub components: Vec<Component>,
    pub g: Expr,
    pub k_min: f64,
    pub k_max: f64,
    pub k_count: usize,
    pub directions: DirectionSpec,
    pub z0s: Vec<Point2>,
    pub taus: Vec<Complex64>,
    pub noise: NoiseSpec,
    pub sampling: Option<SamplingGrid>,
    pub output_dir: Option<String>,
}

impl ScenarioConfig {
    pub fn model(&self) -> crate::Result<SourceModel> {
        SourceModel::new(self.components.clone(), self.g.clone())
    }

    pub fn wavenumbers(&self) -> crate::Result<WaveNumberGrid> {
        WaveNumberGrid::new(self.k_min, self.k_max, self.k_count)
    }

    /// The non-zero strength paired with `τ = 0` in phaseless-indicator modes.
    pub fn indicator_tau(&self) -> Option<Complex64> {
        self.taus.iter().copied().find(|t| *t != Complex64::new(0.0, 0.0))
    }

    /// Serializes to the text format; `parse_config` of the result yields `self`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "name = {}", self.name);
        let _ = writeln!(s, "mode = {}", self.mode.name());
        let _ = writeln!(s, "\n[source]\ng = {}", self.g);
        for c in &self.components {
            let _ = writeln!(s, "\n[component]\nshape = {}\nf = {}", c.shape, c.profile);
        }
        let _ = writeln!(s, "\n[wavenumbers]\nk_min = {:?}\nk_max = {:?}\ncount = {}", self.k_min, self.k_max, self.k_count);
        match &self.directions {
            DirectionSpec::Angles(a) => {
                let list: Vec<String> = a.iter().map(|v| format!("{v:?}")).collect();
                let _ = writeln!(s, "\n[directions]\nangles = {}", list.join(", "));
            }
            DirectionSpec::Arc { count, start, end } => {
                let _ = writeln!(s, "\n[directions]\ncount = {count}\nstart = {start:?}\nend = {end:?}");
            }
        }
        let z0: Vec<String> = self.z0s.iter().map(|p| format!("({:?}, {:?})", p.x, p.y)).collect();
        let taus: Vec<String> = self.taus.iter().map(|t| format_complex(*t)).collect();
        let _ = writeln!(s, "\n[reference]\nz0 = {}\ntau = {}", z0.join("; "), taus.join(", "));
        let _ = writeln!(s, "\n[noise]\nkind = {}\nlevel = {:?}\nseed = {}", self.noise.kind.name(), self.noise.level, self.noise.seed);
        if let Some(g) = &self.sampling {
            let _ =
                writeln!(s, "\n[sampling]\nx_lo = {:?}\nx_hi = {:?}\ny_lo = {:?}\ny_hi = {:?}\nnx = {}\nny = {}", g.x_lo, g.x_hi, g.y_lo, g.y_hi, g.nx, g.ny);
        }
        if let Some(dir) = &self.output_dir {
            let _ = writeln!(s, "\n[output]\ndir = {dir}");
        }
        s
    }
}

impl fmt::Display for ScenarioConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn format_complex(t: Complex64) -> String {
    if t.im == 0.0 {
        format!("{:?}", t.re)
    } else if t.re == 0.0 {
        format!("{:?}i", t.im)
    } else {
        let sign = if t.im < 0.0 { '-' } else { '+' };
        format!("{:?}{sign}{:?}i", t.re, t.im.abs())
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(p) => (body[..p].parse::<f64>().ok()?, &body[p..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().ok()?,
    };
    Some(Complex64::new(re, im))
}

#[derive(Debug)]
struct Entry {
    value: String,
    line: usize,
}

#[derive(Debug)]
struct Section {
    name: String,
    line: usize,
    entries: HashMap<String, Entry>,
}

fn allowed_keys(section: &str) -> Option<&'static [&'static str]> {
    Some(match section {
        "" => &["name", "mode"],
        "source" => &["g"],
        "component" => &["shape", "f"],
        "wavenumbers" => &["k_min", "k_max", "count"],
        "directions" => &["angles", "count", "start", "end"],
        "reference" => &["z0", "tau"],
        "noise" => &["kind", "level", "seed"],
        "sampling" => &["x_lo", "x_hi", "y_lo", "y_hi", "nx", "ny"],
        "output" => &["dir"],
        _ => return None,
    })
}

fn split_sections(text: &str, errors: &mut Vec<ConfigError>) -> Vec<Section> {
    let mut sections = vec![Section { name: String::new(), line: 0, entries: HashMap::new() }];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                errors.push(ConfigError::at(line_no, "malformed section header"));
                continue;
            };
            let name = name.trim().to_string();
            if allowed_keys(&name).is_none() {
                errors.push(ConfigError::at(line_no, format!("unknown section [{name}]")));
            } else if name != "component" && sections.iter().any(|s| s.name == name) {
                errors.push(ConfigError::at(line_no, format!("duplicate section [{name}]")));
            }
            sections.push(Section { name, line: line_no, entries: HashMap::new() });
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            errors.push(ConfigError::at(line_no, "expected `key = value`"));
            continue;
        };
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        let section = sections.last_mut().unwrap();
        match allowed_keys(&section.name) {
            Some(keys) if !keys.contains(&key.as_str()) => {
                let where_ = if section.name.is_empty() { "top level".to_string() } else { format!("[{}]", section.name) };
                errors.push(ConfigError::at(line_no, format!("unknown key `{key}` in {where_}")));
            }
            None => {}
            Some(_) => match section.entries.entry(key) {
                Entry_::Occupied(e) => errors.push(ConfigError::at(line_no, format!("duplicate key `{}`", e.key()))),
                Entry_::Vacant(e) => {
                    e.insert(Entry { value, line: line_no });
                }
            },
        }
    }
    sections
}

struct Reader<'a> {
    errors: &'a mut Vec<ConfigError>,
}

impl Reader<'_> {
    fn required<'s>(&mut self, section: &'s Section, key: &str) -> Option<&'s Entry> {
        let e = section.entries.get(key);
        if e.is_none() {
            let where_ = if section.name.is_empty() { "at top level".to_string() } else { format!("in [{}] (line {})", section.name, section.line) };
            self.errors.push(ConfigError::global(format!("missing key `{key}` {where_}")));
        }
        e
    }

    fn number(&mut self, e: &Entry) -> Option<f64> {
        match Expr::parse(&e.value).and_then(|x| x.eval_constant()) {
            Ok(v) if v.is_finite() => Some(v),
            Ok(v) => {
                self.errors.push(ConfigError::at(e.line, format!("value {v} is not finite")));
                None
            }
            Err(err) => {
                self.errors.push(ConfigError::at(e.line, format!("bad number `{}`: {err}", e.value)));
                None
            }
        }
    }

    fn integer(&mut self, e: &Entry) -> Option<u64> {
        let v = e.value.parse::<u64>().ok();
        if v.is_none() {
            self.errors.push(ConfigError::at(e.line, format!("expected a non-negative integer, got `{}`", e.value)));
        }
        v
    }

    fn expr(&mut self, e: &Entry, allowed: &[Var]) -> Option<Expr> {
        match Expr::parse(&e.value).and_then(|x| x.check_variables(allowed).map(|_| x)) {
            Ok(x) => Some(x),
            Err(err) => {
                self.errors.push(ConfigError::at(e.line, format!("bad expression `{}`: {err}", e.value)));
                None
            }
        }
    }

    fn shape(&mut self, e: &Entry) -> Option<Shape> {
        match parse_shape(&e.value) {
            Ok(s) => Some(s),
            Err(msg) => {
                self.errors.push(ConfigError::at(e.line, msg));
                None
            }
        }
    }
}

/// Splits on commas (or `sep`) at parenthesis depth zero.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn constant(s: &str) -> Result<f64, String> {
    Expr::parse(s).and_then(|e| e.eval_constant()).map_err(|e| format!("bad number `{s}`: {e}"))
}

fn parse_point(s: &str) -> Result<Point2, String> {
    let inner = s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(|| format!("expected a point `(x, y)`, got `{s}`"))?;
    match split_top(inner, ',').as_slice() {
        [x, y] => Ok(Point2::new(constant(x)?, constant(y)?)),
        _ => Err(format!("expected a point `(x, y)`, got `{s}`")),
    }
}

pub fn parse_shape(text: &str) -> Result<Shape, String> {
    let text = text.trim();
    let open = text.find('(').ok_or_else(|| format!("expected `kind(args)`, got `{text}`"))?;
    let args_text = text[open + 1..].strip_suffix(')').ok_or_else(|| format!("missing closing `)` in `{text}`"))?;
    let kind = text[..open].trim();
    let args = split_top(args_text, ',');
    let nums = |n: usize| -> Result<Vec<f64>, String> {
        if args.len() != n {
            return Err(format!("`{kind}` takes {n} arguments, got {}", args.len()));
        }
        args.iter().map(|a| constant(a)).collect()
    };
    let shape = match kind {
        "rect" => {
            let v = nums(4)?;
            Shape::rectangle(v[0], v[1], v[2], v[3])
        }
        "disc" => {
            let v = nums(3)?;
            Shape::disc(Point2::new(v[0], v[1]), v[2])
        }
        "polygon" => Shape::polygon(args.iter().map(|a| parse_point(a)).collect::<Result<Vec<_>, _>>()?),
        "difference" => {
            if args.len() != 2 {
                return Err(format!("`difference` takes 2 shapes, got {}", args.len()));
            }
            Shape::difference(parse_shape(args[0])?, parse_shape(args[1])?)
        }
        other => return Err(format!("unknown shape `{other}` (expected rect, disc, polygon or difference)")),
    };
    shape.map_err(|e| e.to_string())
}

/// Parses and validates a scenario; all problems are reported together.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigErrors> {
    let mut errors = Vec::new();
    let sections = split_sections(text, &mut errors);
    let find = |name: &str| sections.iter().find(|s| s.name == name);
    let mut r = Reader { errors: &mut errors };

    let top = &sections[0];
    let name = r.required(top, "name").map(|e| e.value.clone());
    let mode = r.required(top, "mode").and_then(|e| {
        let m = Mode::parse(&e.value);
        if m.is_none() {
            let names: Vec<&str> = Mode::ALL.iter().map(|m| m.name()).collect();
            r.errors.push(ConfigError::at(e.line, format!("unknown mode `{}` (expected one of {})", e.value, names.join(", "))));
        }
        m
    });

    let g = match find("source") {
        Some(s) => r.required(s, "g").and_then(|e| r.expr(e, &[Var::K])),
        None => {
            r.errors.push(ConfigError::global("missing section [source]"));
            None
        }
    };

    let mut components = Vec::new();
    let mut component_lines = Vec::new();
    for s in sections.iter().filter(|s| s.name == "component") {
        let shape = r.required(s, "shape").and_then(|e| r.shape(e));
        let f = r.required(s, "f").and_then(|e| r.expr(e, &[Var::X, Var::Y]));
        if let (Some(shape), Some(profile)) = (shape, f) {
            components.push(Component { shape, profile });
            component_lines.push(s.line);
        }
    }
    if !sections.iter().any(|s| s.name == "component") {
        r.errors.push(ConfigError::global("at least one [component] section is required"));
    }

    let (mut k_min, mut k_max, mut k_count) = (None, None, None);
    match find("wavenumbers") {
        Some(s) => {
            k_min = r.required(s, "k_min").and_then(|e| r.number(e));
            k_max = r.required(s, "k_max").and_then(|e| r.number(e));
            k_count = r.required(s, "count").and_then(|e| r.integer(e));
        }
        None => r.errors.push(ConfigError::global("missing section [wavenumbers]")),
    }

    let directions = match find("directions") {
        Some(s) => match (s.entries.get("angles"), s.entries.get("count")) {
            (Some(e), None) => {
                let parts = split_top(&e.value, ',');
                let angles: Vec<Option<f64>> = parts
                    .iter()
                    .map(|p| match constant(p) {
                        Ok(v) => Some(v),
                        Err(m) => {
                            r.errors.push(ConfigError::at(e.line, m));
                            None
                        }
                    })
                    .collect();
                let angles: Option<Vec<f64>> = angles.into_iter().collect();
                if let Some(a) = &angles {
                    for (i, x) in a.iter().enumerate() {
                        if a[..i].contains(x) {
                            r.errors.push(ConfigError::at(e.line, format!("duplicate direction angle {x}")));
                        }
                    }
                    if a.is_empty() {
                        r.errors.push(ConfigError::at(e.line, "direction list is empty"));
                    }
                }
                angles.map(DirectionSpec::Angles)
            }
            (None, Some(c)) => {
                let count = r.integer(c);
                let start = r.required(s, "start").and_then(|e| r.number(e));
                let end = r.required(s, "end").and_then(|e| r.number(e));
                match (count, start, end) {
                    (Some(count), Some(start), Some(end)) => {
                        if count == 0 {
                            r.errors.push(ConfigError::at(c.line, "direction count must be at least 1"));
                        } else if start == end {
                            r.errors.push(ConfigError::at(c.line, "arc endpoints coincide; directions would repeat"));
                        } else {
                            let dirs = arc_directions(count as usize, start, end);
                            for (i, d) in dirs.iter().enumerate() {
                                if dirs[..i].iter().any(|o| o.angle() == d.angle()) {
                                    r.errors.push(ConfigError::at(c.line, format!("duplicate direction angle {}", d.angle())));
                                    break;
                                }
                            }
                        }
                        Some(DirectionSpec::Arc { count: count as usize, start, end })
                    }
                    _ => None,
                }
            }
            (Some(e), Some(_)) => {
                r.errors.push(ConfigError::at(e.line, "use either `angles` or `count`/`start`/`end`, not both"));
                None
            }
            (None, None) => {
                r.errors.push(ConfigError::at(s.line, "[directions] needs `angles` or `count`/`start`/`end`"));
                None
            }
        },
        None => {
            r.errors.push(ConfigError::global("missing section [directions]"));
            None
        }
    };

    let (mut z0s, mut taus, mut tau_line, mut z0_line) = (None, None, 0, 0);
    match find("reference") {
        Some(s) => {
            if let Some(e) = r.required(s, "z0") {
                z0_line = e.line;
                let pts: Result<Vec<Point2>, String> = split_top(&e.value, ';').iter().map(|p| parse_point(p)).collect();
                match pts {
                    Ok(p) => z0s = Some(p),
                    Err(m) => r.errors.push(ConfigError::at(e.line, m)),
                }
            }
            if let Some(e) = r.required(s, "tau") {
                tau_line = e.line;
                let list: Vec<&str> = if e.value.trim().is_empty() { Vec::new() } else { split_top(&e.value, ',') };
                let parsed: Option<Vec<Complex64>> = list.iter().map(|t| parse_complex(t)).collect();
                match parsed {
                    Some(t) => {
                        for (i, x) in t.iter().enumerate() {
                            if t[..i].contains(x) {
                                r.errors.push(ConfigError::at(e.line, format!("duplicate strength {x}")));
                            }
                        }
                        taus = Some(t)
                    }
                    None => r.errors.push(ConfigError::at(e.line, format!("bad complex list `{}`", e.value))),
                }
            }
        }
        None => r.errors.push(ConfigError::global("missing section [reference]")),
    }

    let noise = match find("noise") {
        None => Some(NoiseSpec { kind: NoiseKind::None, level: 0.0, seed: 0 }),
        Some(s) => {
            let kind = match s.entries.get("kind") {
                None => Some(NoiseKind::None),
                Some(e) => match e.value.as_str() {
                    "none" => Some(NoiseKind::None),
                    "relative" => Some(NoiseKind::Relative),
                    "absolute" => Some(NoiseKind::Absolute),
                    other => {
                        r.errors.push(ConfigError::at(e.line, format!("unknown noise kind `{other}`")));
                        None
                    }
                },
            };
            let level = match s.entries.get("level") {
                None => Some(0.0),
                Some(e) => r.number(e).and_then(|v| {
                    if v < 0.0 {
                        r.errors.push(ConfigError::at(e.line, "noise level must be non-negative"));
                        None
                    } else {
                        Some(v)
                    }
                }),
            };
            let seed = match s.entries.get("seed") {
                None => Some(0),
                Some(e) => r.integer(e),
            };
            match (kind, level, seed) {
                (Some(kind), Some(level), Some(seed)) => Some(NoiseSpec { kind, level, seed }),
                _ => None,
            }
        }
    };

    let sampling = find("sampling").and_then(|s| {
        let vals: Vec<Option<f64>> = ["x_lo", "x_hi", "y_lo", "y_hi"].iter().map(|k| r.required(s, k).and_then(|e| r.number(e))).collect();
        let nx = r.required(s, "nx").and_then(|e| r.integer(e));
        let ny = r.required(s, "ny").and_then(|e| r.integer(e));
        match (vals[0], vals[1], vals[2], vals[3], nx, ny) {
            (Some(a), Some(b), Some(c), Some(d), Some(nx), Some(ny)) => match SamplingGrid::new(a, b, c, d, nx as usize, ny as usize) {
                Ok(g) => Some(g),
                Err(e) => {
                    r.errors.push(ConfigError::at(s.line, e.to_string()));
                    None
                }
            },
            _ => None,
        }
    });

    let output_dir = find("output").and_then(|s| r.required(s, "dir").map(|e| e.value.clone()));

    // Cross-field validation only makes sense once every piece parsed.
    if let (Some(name), Some(mode), Some(g), Some(k_min), Some(k_max), Some(k_count), Some(directions), Some(z0s), Some(taus), Some(noise)) =
        (name, mode, g, k_min, k_max, k_count, directions, z0s, taus, noise)
    {
        if errors.is_empty() {
            let cfg = ScenarioConfig { name, mode, components, g, k_min, k_max, k_count: k_count as usize, directions, z0s, taus, noise, sampling, output_dir };
            validate(&cfg, &component_lines, z0_line, tau_line, &mut errors);
            if errors.is_empty() {
                return Ok(cfg);
            }
        }
    }
    if errors.is_empty() {
        errors.push(ConfigError::global("incomplete configuration"));
    }
    Err(ConfigErrors(errors))
}

fn validate(cfg: &ScenarioConfig, component_lines: &[usize], z0_line: usize, tau_line: usize, errors: &mut Vec<ConfigError>) {
    if cfg.name.trim().is_empty() {
        errors.push(ConfigError::global("`name` must not be empty"));
    }
    let model = match cfg.model() {
        Ok(m) => Some(m),
        Err(e) => {
            let line = component_lines.last().copied();
            errors.push(ConfigError { line, message: e.to_string() });
            None
        }
    };
    if let Err(e) = cfg.wavenumbers() {
        errors.push(ConfigError::global(format!("[wavenumbers]: {e}")));
    }
    if cfg.z0s.is_empty() {
        errors.push(ConfigError::at(z0_line, "at least one reference point is required"));
    }
    if let Some(m) = &model {
        for z0 in &cfg.z0s {
            if let Err(e) = ReferenceSource::check_outside(m, *z0) {
                errors.push(ConfigError::at(z0_line, e.to_string()));
            }
        }
    }
    if cfg.taus.is_empty() {
        errors.push(ConfigError::at(tau_line, format!("mode {} needs a non-empty strength list", cfg.mode.name())));
        return;
    }
    let zero = Complex64::new(0.0, 0.0);
    match cfg.mode {
        Mode::Forward | Mode::SampleI2 => {}
        Mode::Retrieve | Mode::FullSchemeTwo => {
            if cfg.taus.len() != 3 {
                errors.push(ConfigError::at(tau_line, format!("mode {} needs exactly three strengths, got {}", cfg.mode.name(), cfg.taus.len())));
            } else if check_strengths([cfg.taus[0], cfg.taus[1], cfg.taus[2]]).is_err() {
                errors.push(ConfigError::at(tau_line, "strength differences τ2−τ1 and τ3−τ1 must be linearly independent"));
            }
            if cfg.z0s.len() != 1 {
                errors.push(ConfigError::at(z0_line, format!("mode {} needs exactly one reference point", cfg.mode.name())));
            }
        }
        Mode::SampleI1 | Mode::FullSchemeOne => {
            let nonzero = cfg.taus.iter().filter(|t| **t != zero).count();
            if !cfg.taus.contains(&zero) || nonzero != 1 || cfg.taus.len() != 2 {
                errors.push(ConfigError::at(tau_line, format!("mode {} needs strengths {{0, τ1}} with exactly one non-zero τ1", cfg.mode.name())));
            }
        }
    }
    if cfg.mode.needs_sampling() && cfg.sampling.is_none() {
        errors.push(ConfigError::global(format!("mode {} needs a [sampling] section", cfg.mode.name())));
    }
}
