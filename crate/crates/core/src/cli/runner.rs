//! Executes a parsed scenario: synthesis, noise, phase retrieval and
//! sampling, producing named text artifacts plus a JSON manifest.

use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::{Mode, ScenarioConfig};
use crate::error::Result;
use crate::forward::{apply_absolute_noise, apply_relative_noise, synthesize, Dataset, NoiseKind, PhasedField};
use crate::io;
use crate::phase_retrieval::retrieve_phased_field;
use crate::sampling::{combine_min_normalized, evaluate_on_grid, IndicatorField, PhasedIndicator, PhaselessIndicator};

/// One output file, held in memory until written.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub path: String,
    pub contents: String,
}

impl Artifact {
    fn new(path: impl Into<String>, contents: String) -> Self {
        Self { path: path.into(), contents }
    }

    pub fn sha256(&self) -> String {
        hex(&Sha256::digest(self.contents.as_bytes()))
    }
}

/// Everything a run computed. `fields` holds one entry per reference point
/// (or one for the phased indicator); `combined` is their pointwise minimum.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub datasets: Vec<Dataset>,
    pub retrieved: Option<PhasedField>,
    pub fields: Vec<IndicatorField>,
    pub combined: Option<IndicatorField>,
    pub artifacts: Vec<Artifact>,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
struct ManifestEntry<'a> {
    path: &'a str,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    name: &'a str,
    mode: &'a str,
    config_sha256: String,
    seed: u64,
    artifacts: Vec<ManifestEntry<'a>>,
    wall_time_ms: u128,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn noisy(ds: Dataset, kind: NoiseKind, level: f64, seed: u64) -> Dataset {
    match kind {
        NoiseKind::None => ds,
        NoiseKind::Relative => apply_relative_noise(&ds, level, seed),
        NoiseKind::Absolute => apply_absolute_noise(&ds, level, seed),
    }
}

fn field_artifacts(field: &IndicatorField, stem: &str, out: &mut Vec<Artifact>) {
    out.push(Artifact::new(format!("{stem}.csv"), io::field_csv(field)));
    out.push(Artifact::new(format!("{stem}.pgm"), io::field_pgm(field)));
}

/// Runs `cfg` in memory. `seed` overrides the configured noise seed.
///
/// With several reference points, dataset `i` is perturbed with seed
/// `seed + i` and artifacts carry a `_ref{i+1}` suffix.
pub fn run(cfg: &ScenarioConfig, seed: Option<u64>) -> Result<RunOutcome> {
    let seed = seed.unwrap_or(cfg.noise.seed);
    let model = cfg.model()?;
    let grid = cfg.wavenumbers()?;
    let directions = cfg.directions.directions();
    let multi = cfg.z0s.len() > 1;
    let suffix = |i: usize| if multi { format!("_ref{}", i + 1) } else { String::new() };

    let mut datasets = Vec::with_capacity(cfg.z0s.len());
    for (i, z0) in cfg.z0s.iter().enumerate() {
        let clean = synthesize(&model, *z0, &cfg.taus, &directions, &grid)?;
        datasets.push(noisy(clean, cfg.noise.kind, cfg.noise.level, seed.wrapping_add(i as u64)));
    }

    let mut artifacts = Vec::new();
    let truth = datasets[0].phased.clone().expect("synthesized datasets carry phased truth");
    artifacts.push(Artifact::new("phased_truth.csv", io::phased_csv(&truth.records(), None)));
    for (i, ds) in datasets.iter().enumerate() {
        artifacts.push(Artifact::new(format!("phaseless{}.csv", suffix(i)), io::phaseless_csv(&ds.phaseless)));
    }

    let mut retrieved = None;
    let mut fields = Vec::new();
    match cfg.mode {
        Mode::Forward => {}
        Mode::Retrieve | Mode::FullSchemeTwo => {
            let field = retrieve_phased_field(&datasets[0], three(&cfg.taus))?;
            artifacts.push(Artifact::new("retrieved.csv", io::phased_csv(&field.records(), Some("retrieved"))));
            if cfg.mode == Mode::FullSchemeTwo {
                let grid = cfg.sampling.expect("validated");
                fields.push(evaluate_on_grid(&PhasedIndicator::from_field(&field)?, &grid));
            }
            retrieved = Some(field);
        }
        Mode::SampleI2 => {
            let grid = cfg.sampling.expect("validated");
            fields.push(evaluate_on_grid(&PhasedIndicator::from_field(&truth)?, &grid));
        }
        Mode::SampleI1 | Mode::FullSchemeOne => {
            let grid = cfg.sampling.expect("validated");
            let tau1 = cfg.indicator_tau().expect("validated");
            for ds in &datasets {
                fields.push(evaluate_on_grid(&PhaselessIndicator::from_dataset(ds, tau1)?, &grid));
            }
        }
    }

    for (i, f) in fields.iter().enumerate() {
        field_artifacts(f, &format!("field{}", suffix(i)), &mut artifacts);
    }
    let combined = if fields.len() > 1 { Some(combine_min_normalized(&fields)?) } else { None };
    if let Some(c) = &combined {
        field_artifacts(c, "field_combined", &mut artifacts);
    }

    Ok(RunOutcome { datasets, retrieved, fields, combined, artifacts, seed })
}

fn three(taus: &[Complex64]) -> [Complex64; 3] {
    [taus[0], taus[1], taus[2]]
}

/// Writes the artifacts and `manifest.json` into `dir`, creating it if needed.
pub fn write_outputs(outcome: &RunOutcome, cfg: &ScenarioConfig, config_text: &str, dir: &Path, started: Instant) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for a in &outcome.artifacts {
        std::fs::write(dir.join(&a.path), &a.contents)?;
    }
    let manifest = Manifest {
        name: &cfg.name,
        mode: cfg.mode.name(),
        config_sha256: hex(&Sha256::digest(config_text.as_bytes())),
        seed: outcome.seed,
        artifacts: outcome.artifacts.iter().map(|a| ManifestEntry { path: &a.path, sha256: a.sha256() }).collect(),
        wall_time_ms: started.elapsed().as_millis(),
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(std::io::Error::other)?;
    std::fs::write(dir.join("manifest.json"), json + "\n")?;
    Ok(())
}
