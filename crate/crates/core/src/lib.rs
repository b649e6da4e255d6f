//! Analysis of turbulent boundary-layer mean-velocity profiles built on the
//! two-layer power-law ("chevron") description of the intermediate region.
//!
//! The pipeline: ingest a velocity profile ([`profile`]), reduce it to wall
//! units, fit two power-law segments in bilogarithmic coordinates with an
//! exhaustive breakpoint search ([`fit`]), invert the inner-layer parameters
//! into an effective Reynolds number with a consistency metric and compute
//! the pressure-gradient similarity parameter ([`similarity`]), and regress
//! the outer-layer prefactor against the inverse exponent across stations at
//! nearly constant effective Reynolds number ([`relation`]). The [`synth`]
//! module forward-generates profiles with known parameters so the whole
//! chain can be validated by round trip.

pub mod error;
pub mod fit;
pub mod linfit;
pub mod profile;
pub mod relation;
pub mod similarity;
pub mod synth;

mod tablefile;

pub use error::{Error, Result};
