//! Unit conversions at the I/O boundary.
//!
//! Internally everything is SI (J, m, s, rad/s, T, kg). Reports and CSV files
//! use the conventional lab units: lengths in nm or µm, energies as
//! temperatures (µK, mK) via the Boltzmann constant, frequencies as
//! ν = ω/2π in MHz, and magnetic fields in Gauss at the wire-formula
//! boundary only.

use crate::constants::{KB, TWO_PI};

/// Energy in J → temperature in µK.
pub fn joule_to_uk(e: f64) -> f64 {
    e / KB * 1e6
}

/// Temperature in µK → energy in J.
pub fn uk_to_joule(t: f64) -> f64 {
    t * 1e-6 * KB
}

/// Energy in J → temperature in mK.
pub fn joule_to_mk(e: f64) -> f64 {
    e / KB * 1e3
}

/// Temperature in mK → energy in J.
pub fn mk_to_joule(t: f64) -> f64 {
    t * 1e-3 * KB
}

/// Angular frequency in rad/s → ν = ω/2π in MHz.
pub fn rad_to_mhz(w: f64) -> f64 {
    w / TWO_PI / 1e6
}

/// ν in MHz → angular frequency in rad/s.
pub fn mhz_to_rad(nu: f64) -> f64 {
    nu * 1e6 * TWO_PI
}

/// Magnetic field in Gauss → Tesla.
pub fn gauss_to_tesla(b: f64) -> f64 {
    b * 1e-4
}

/// Magnetic field in Tesla → Gauss.
pub fn tesla_to_gauss(b: f64) -> f64 {
    b * 1e4
}

/// Length in nm → m.
pub fn nm_to_m(l: f64) -> f64 {
    l * 1e-9
}

/// Length in m → nm.
pub fn m_to_nm(l: f64) -> f64 {
    l * 1e9
}

/// Length in µm → m.
pub fn um_to_m(l: f64) -> f64 {
    l * 1e-6
}

/// Radial force in N → µK/nm (trap-gradient convention).
pub fn newton_to_uk_per_nm(f: f64) -> f64 {
    f / KB * 1e-6 * 1e-9 * 1e12
}

/// Format a number with 9 significant digits, locale-independent,
/// '.' decimal separator. Used for all CSV emission.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000e0".to_string();
    }
    format!("{:.8e}", x)
}
