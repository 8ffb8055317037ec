//! Physical constants (CODATA 2018), SI units throughout.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054571817e-34;
/// Planck constant, J·s.
pub const PLANCK: f64 = 6.62607015e-34;
/// Boltzmann constant, J/K.
pub const KB: f64 = 1.380649e-23;
/// Speed of light in vacuum, m/s.
pub const C: f64 = 2.99792458e8;
/// Vacuum permittivity, F/m.
pub const EPS0: f64 = 8.8541878128e-12;
/// Vacuum permeability, H/m.
pub const MU0: f64 = 1.25663706212e-6;
/// Bohr magneton, J/T.
pub const MU_B: f64 = 9.2740100783e-24;
/// Elementary charge, C.
pub const E_CHARGE: f64 = 1.602176634e-19;
/// Bohr radius, m.
pub const A0: f64 = 5.29177210903e-11;
/// 2π, for angular/ordinary frequency conversions.
pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
