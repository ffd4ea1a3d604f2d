//! Multi-frequency phaseless inverse source scattering in two dimensions.
//!
//! The crate synthesizes far-field data for compactly supported sources
//! augmented by reference point sources, recovers the lost phase from three
//! magnitudes with a circle-intersection construction, and images the source
//! support with two direct sampling indicators.

pub mod cli;
pub mod error;
pub mod forward;
pub mod io;
pub mod phase_retrieval;
pub mod sampling;
pub mod scene;

pub use error::{Error, Result};
