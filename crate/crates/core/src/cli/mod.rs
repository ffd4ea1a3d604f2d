//! Scenario files and the batch runner behind the `phaseless` binary.

pub mod config;
pub mod runner;

pub use config::{parse_config, parse_shape, DirectionSpec, Mode, NoiseSpec, ScenarioConfig};
pub use runner::{run, write_outputs, Artifact, RunOutcome};
