use num_complex::Complex64;

use super::noise::NoiseDescriptor;
use super::{far_fields_at, WaveNumberGrid};
use crate::error::{Error, Result};
use crate::scene::{Direction, Point2, ReferenceSource, SourceModel};

/// A phased far-field sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarFieldRecord {
    pub direction: Direction,
    pub k: f64,
    pub value: Complex64,
}

/// A measured far-field magnitude with its reference source settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaselessRecord {
    pub direction: Direction,
    pub k: f64,
    pub tau: Complex64,
    pub z0: Point2,
    pub magnitude: f64,
}

/// Phased far fields on a full (direction × wavenumber) lattice, direction-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasedField {
    pub grid: WaveNumberGrid,
    pub directions: Vec<Direction>,
    values: Vec<Complex64>,
}

impl PhasedField {
    pub fn new(grid: WaveNumberGrid, directions: Vec<Direction>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() * directions.len() {
            return Err(Error::Dataset(format!(
                "phased field needs {} values for {} directions × {} wavenumbers, got {}",
                grid.len() * directions.len(),
                directions.len(),
                grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, directions, values })
    }

    /// Rebuilds the lattice from records, which must cover every
    /// (direction, node) pair of `grid` exactly once.
    pub fn from_records(grid: WaveNumberGrid, directions: Vec<Direction>, records: &[FarFieldRecord]) -> Result<Self> {
        let nk = grid.len();
        let mut slots: Vec<Option<Complex64>> = vec![None; nk * directions.len()];
        for r in records {
            let d = directions
                .iter()
                .position(|d| d.angle() == r.direction.angle())
                .ok_or_else(|| Error::Dataset(format!("record at unknown direction {}", r.direction.angle())))?;
            let j = node_index(&grid, r.k).ok_or_else(|| Error::Dataset(format!("record at k = {} is not a lattice node", r.k)))?;
            let slot = &mut slots[d * nk + j];
            if slot.is_some() {
                return Err(Error::Dataset(format!("duplicate record at angle {} k {}", r.direction.angle(), r.k)));
            }
            *slot = Some(r.value);
        }
        let values = slots
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Dataset(format!("missing record at angle {} k {}", directions[i / nk].angle(), grid.node(i % nk)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(grid, directions, values)
    }

    pub fn slice(&self, direction_index: usize) -> &[Complex64] {
        let nk = self.grid.len();
        &self.values[direction_index * nk..(direction_index + 1) * nk]
    }

    pub fn value(&self, direction_index: usize, k_index: usize) -> Complex64 {
        self.values[direction_index * self.grid.len() + k_index]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn records(&self) -> Vec<FarFieldRecord> {
        let nk = self.grid.len();
        self.values.iter().enumerate().map(|(i, v)| FarFieldRecord { direction: self.directions[i / nk], k: self.grid.node(i % nk), value: *v }).collect()
    }
}

pub(crate) fn node_index(grid: &WaveNumberGrid, k: f64) -> Option<usize> {
    let j = (k / grid.step() - 0.5).round();
    if j < 0.0 || j >= grid.len() as f64 {
        return None;
    }
    let j = j as usize;
    ((grid.node(j) - k).abs() <= 1e-12 * k.abs().max(1.0)).then_some(j)
}

/// Phaseless measurements on the (direction × wavenumber × strength) lattice
/// for one reference point, in that nesting order, plus the phased truth.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub grid: WaveNumberGrid,
    pub directions: Vec<Direction>,
    pub z0: Point2,
    pub taus: Vec<Complex64>,
    pub phased: Option<PhasedField>,
    pub phaseless: Vec<PhaselessRecord>,
    pub noise: NoiseDescriptor,
}

impl Dataset {
    pub fn record_index(&self, direction_index: usize, k_index: usize, tau_index: usize) -> usize {
        (direction_index * self.grid.len() + k_index) * self.taus.len() + tau_index
    }

    pub fn magnitude(&self, direction_index: usize, k_index: usize, tau_index: usize) -> f64 {
        self.phaseless[self.record_index(direction_index, k_index, tau_index)].magnitude
    }

    pub fn tau_index(&self, tau: Complex64) -> Option<usize> {
        self.taus.iter().position(|t| *t == tau)
    }

    pub fn require_tau(&self, tau: Complex64) -> Result<usize> {
        self.tau_index(tau).ok_or_else(|| Error::Dataset(format!("no records for tau = {tau}")))
    }

    /// Checks that the records form the declared lattice in canonical order.
    pub fn check_lattice(&self) -> Result<()> {
        let expected = self.directions.len() * self.grid.len() * self.taus.len();
        if self.phaseless.len() != expected {
            return Err(Error::Dataset(format!("expected {expected} phaseless records, found {}", self.phaseless.len())));
        }
        for (a, ta) in self.taus.iter().enumerate() {
            if self.taus[a + 1..].contains(ta) {
                return Err(Error::Dataset(format!("duplicate tau {ta}")));
            }
        }
        for (a, da) in self.directions.iter().enumerate() {
            if self.directions[a + 1..].iter().any(|d| d.angle() == da.angle()) {
                return Err(Error::Dataset(format!("duplicate direction {}", da.angle())));
            }
        }
        for d in 0..self.directions.len() {
            for j in 0..self.grid.len() {
                for t in 0..self.taus.len() {
                    let r = &self.phaseless[self.record_index(d, j, t)];
                    let k = self.grid.node(j);
                    if r.direction.angle() != self.directions[d].angle() || (r.k - k).abs() > 1e-12 * k || r.tau != self.taus[t] {
                        return Err(Error::Dataset(format!(
                            "record {} out of lattice order (angle {}, k {}, tau {})",
                            self.record_index(d, j, t),
                            r.direction.angle(),
                            r.k,
                            r.tau
                        )));
                    }
                    if !(r.magnitude >= 0.0) {
                        return Err(Error::Dataset(format!("negative or NaN magnitude {}", r.magnitude)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Rebuilds a dataset from phaseless records in any order. Directions,
    /// wavenumbers and strengths are taken in order of first appearance.
    pub fn from_phaseless_records(records: Vec<PhaselessRecord>) -> Result<Self> {
        let first = records.first().ok_or_else(|| Error::Dataset("no phaseless records".into()))?;
        let z0 = first.z0;
        let mut angles: Vec<f64> = Vec::new();
        let mut ks: Vec<f64> = Vec::new();
        let mut taus: Vec<Complex64> = Vec::new();
        for r in &records {
            if r.z0 != z0 {
                return Err(Error::Dataset("records mix several reference points".into()));
            }
            if !angles.contains(&r.direction.angle()) {
                angles.push(r.direction.angle());
            }
            if !ks.contains(&r.k) {
                ks.push(r.k);
            }
            if !taus.contains(&r.tau) {
                taus.push(r.tau);
            }
        }
        ks.sort_by(f64::total_cmp);
        let n = ks.len();
        let step = if n > 1 { (ks[n - 1] - ks[0]) / (n - 1) as f64 } else { 2.0 * ks[0] };
        let grid = WaveNumberGrid::new(ks[0], step * n as f64, n)?;
        let directions: Vec<Direction> = angles.iter().map(|a| Direction::from_angle(*a)).collect();
        let mut slots: Vec<Option<PhaselessRecord>> = vec![None; directions.len() * n * taus.len()];
        for r in records {
            let d = angles.iter().position(|a| *a == r.direction.angle()).unwrap();
            let j = node_index(&grid, r.k).ok_or_else(|| Error::Dataset(format!("k = {} is not on a midpoint lattice", r.k)))?;
            let t = taus.iter().position(|t| *t == r.tau).unwrap();
            let slot = &mut slots[(d * n + j) * taus.len() + t];
            if slot.is_some() {
                return Err(Error::Dataset(format!("duplicate record at angle {} k {} tau {}", r.direction.angle(), r.k, r.tau)));
            }
            *slot = Some(PhaselessRecord { direction: directions[d], k: grid.node(j), ..r });
        }
        let phaseless =
            slots.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| Error::Dataset("phaseless records do not cover the full lattice".into()))?;
        Ok(Dataset { grid, directions, z0, taus, phased: None, phaseless, noise: NoiseDescriptor::none() })
    }
}

/// Evaluates noise-free phased truth and phaseless magnitudes for every
/// (direction, node, τ) triple with one shared reference point `z0`.
pub fn synthesize(model: &SourceModel, z0: Point2, taus: &[Complex64], directions: &[Direction], grid: &WaveNumberGrid) -> Result<Dataset> {
    if taus.is_empty() {
        return Err(Error::Precondition("at least one scattering strength is required".into()));
    }
    if directions.is_empty() {
        return Err(Error::Precondition("at least one observation direction is required".into()));
    }
    ReferenceSource::check_outside(model, z0)?;
    let nk = grid.len();
    let mut values = vec![Complex64::new(0.0, 0.0); directions.len() * nk];
    for j in 0..nk {
        let at_k = far_fields_at(model, grid.node(j), directions)?;
        for (d, v) in at_k.into_iter().enumerate() {
            values[d * nk + j] = v;
        }
    }
    let phased = PhasedField::new(*grid, directions.to_vec(), values)?;
    let mut phaseless = Vec::with_capacity(directions.len() * nk * taus.len());
    for (d, dir) in directions.iter().enumerate() {
        for j in 0..nk {
            let k = grid.node(j);
            // |u + τ e^{-ik x̂·z0}| = |u e^{ik x̂·z0} + τ|, exact for u = 0
            let shifted = phased.value(d, j) * Complex64::from_polar(1.0, k * dir.project(z0));
            for &tau in taus {
                phaseless.push(PhaselessRecord { direction: *dir, k, tau, z0, magnitude: (shifted + tau).norm() });
            }
        }
    }
    let ds = Dataset { grid: *grid, directions: directions.to_vec(), z0, taus: taus.to_vec(), phased: Some(phased), phaseless, noise: NoiseDescriptor::none() };
    ds.check_lattice()?;
    Ok(ds)
}
