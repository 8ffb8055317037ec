//! Design and audit library for bichromatic evanescent-wave atom traps at
//! the surface of microdisk whispering-gallery resonators.
//!
//! The crate models the radial potential landscape (two-color dipole terms,
//! atom-surface attraction, optional wire magnetic trap), characterizes the
//! resulting trap (depth, 3D frequencies, ground state, WKB tunneling),
//! evaluates dispersive detection (signal-to-noise, scattering, recoil
//! heating), audits backscatter-induced depth fluctuations, and sweeps the
//! photon-number / trap-distance plane for feasible operating points.
//!
//! Everything is SI internally; the [`units`] module holds the I/O
//! conversions and the fixed-precision CSV formatting.

pub mod backscatter;
pub mod bessel;
pub mod config;
pub mod constants;
pub mod detection;
pub mod error;
pub mod fields;
pub mod modes;
pub mod potentials;
pub mod species;
pub mod sweep;
pub mod trapology;
pub mod units;

pub use config::{Config, FeasibilitySpec, TrapSystem};
pub use detection::DetectionReport;
pub use error::{CoreError, Result};
pub use trapology::TrapReport;
