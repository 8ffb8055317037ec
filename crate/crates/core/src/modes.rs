//! Whispering-gallery-mode catalog and the disk geometry.
//!
//! A `ModeSpec` carries one mode's optical parameters (wavelength, indices,
//! quality factors, single-photon Rabi frequency, evanescent decay constant).
//! The catalog is keyed by (disk diameter, longitudinal index, radial index).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::constants::{C, TWO_PI};
use crate::error::{CoreError, Result};
use crate::species::TransitionLabel;

/// Disk geometry and the waveguide coupling gap.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DiskGeometry {
    /// Disk diameter, m.
    pub diameter: f64,
    /// Disk height, m.
    pub height: f64,
    /// Waveguide-disk gap, m.
    pub gap: f64,
    /// Disk refractive index.
    pub refractive_index: f64,
}

impl DiskGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.diameter > 0.0) || !(self.height > 0.0) {
            return Err(CoreError::NonPositiveConstant("disk dimensions".to_string()));
        }
        if self.gap < 0.0 {
            return Err(CoreError::NonPositiveConstant("gap".to_string()));
        }
        if !(self.refractive_index > 1.0) {
            return Err(CoreError::Config("refractive index must exceed 1".to_string()));
        }
        Ok(())
    }

    /// Disk radius, m.
    pub fn radius(&self) -> f64 {
        0.5 * self.diameter
    }
}

/// One whispering-gallery mode's optical parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeSpec {
    /// Disk diameter this mode belongs to, m.
    pub disk_diameter: f64,
    /// Longitudinal mode index l.
    pub longitudinal_index: u32,
    /// Radial mode index q.
    pub radial_index: u32,
    /// Mode wavelength, m.
    pub wavelength: f64,
    /// Quality factor at a 0.5 µm waveguide gap.
    pub q1: f64,
    /// Quality factor at a 0.9 µm waveguide gap.
    pub q2: f64,
    /// Single-photon Rabi frequency at the disk boundary, rad/s.
    pub g0: f64,
    /// Evanescent intensity decay constant α, 1/m. The field amplitude and
    /// g(r) decay as e^(−αr/2).
    pub alpha: f64,
    /// Atomic transition the mode is referenced to.
    pub target_transition: TransitionLabel,
}

impl ModeSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("disk_diameter", self.disk_diameter),
            ("wavelength", self.wavelength),
            ("q1", self.q1),
            ("q2", self.q2),
            ("g0", self.g0),
            ("alpha", self.alpha),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(CoreError::NonPositiveConstant(format!("mode {name}")));
            }
        }
        if self.q2 < self.q1 {
            return Err(CoreError::Config(
                "Q at 0.9 um gap must not be below Q at 0.5 um".to_string(),
            ));
        }
        Ok(())
    }

    /// Optical angular frequency ω = 2πc/λ, rad/s.
    pub fn omega(&self) -> f64 {
        TWO_PI * C / self.wavelength
    }

    /// Total decay rate κ = ω/(2Q) for a given quality factor, rad/s.
    pub fn kappa_for_q(&self, q: f64) -> f64 {
        self.omega() / (2.0 * q)
    }
}

/// Catalog key: diameter to the nearest nm plus the two mode indices.
pub type ModeKey = (u64, u32, u32);

fn key_of(diameter: f64, l: u32, q: u32) -> ModeKey {
    ((diameter * 1e9).round() as u64, l, q)
}

/// Validated mode catalog keyed by (D, l, q).
#[derive(Debug, Clone, Default)]
pub struct ModeCatalog {
    modes: BTreeMap<ModeKey, ModeSpec>,
}

impl ModeCatalog {
    /// Build a catalog from rows, rejecting duplicates and invalid rows.
    pub fn new(rows: Vec<ModeSpec>) -> Result<Self> {
        let mut modes = BTreeMap::new();
        for row in rows {
            row.validate()?;
            let key = key_of(row.disk_diameter, row.longitudinal_index, row.radial_index);
            if modes.insert(key, row).is_some() {
                return Err(CoreError::DuplicateMode(format!("{key:?}")));
            }
        }
        Ok(Self { modes })
    }

    /// Exact lookup by (diameter, l, q).
    pub fn get(&self, diameter: f64, l: u32, q: u32) -> Result<&ModeSpec> {
        self.modes
            .get(&key_of(diameter, l, q))
            .ok_or_else(|| CoreError::UnknownMode(format!("D={diameter} l={l} q={q}")))
    }

    pub fn iter(&self) -> impl Iterator<Item = &ModeSpec> {
        self.modes.values()
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn table_mode(
        d_um: f64,
        l: u32,
        lam_nm: f64,
        q1: f64,
        q2: f64,
        g0_mhz: f64,
        alpha_amplitude_per_um: f64,
        target: TransitionLabel,
    ) -> ModeSpec {
        ModeSpec {
            disk_diameter: d_um * 1e-6,
            longitudinal_index: l,
            radial_index: 1,
            wavelength: lam_nm * 1e-9,
            q1,
            q2,
            g0: TWO_PI * g0_mhz * 1e6,
            // internal α is the intensity decay constant: twice the
            // amplitude decay constant of the evanescent field
            alpha: 2.0 * alpha_amplitude_per_um * 1e6,
            target_transition: target,
        }
    }

    pub(crate) fn blue30() -> ModeSpec {
        table_mode(30.0, 167, 778.73, 3.0e6, 1.47e8, 102.6, 7.7, TransitionLabel::D2)
    }

    pub(crate) fn red30() -> ModeSpec {
        table_mode(30.0, 163, 797.2, 2.27e6, 1.39e8, 105.0, 7.3, TransitionLabel::D1)
    }

    pub(crate) fn blue15() -> ModeSpec {
        table_mode(15.0, 82, 771.3, 1.56e6, 0.77e8, 202.5, 7.06, TransitionLabel::D2)
    }

    pub(crate) fn red15() -> ModeSpec {
        table_mode(15.0, 79, 799.2, 1.02e6, 0.70e8, 209.8, 6.75, TransitionLabel::D1)
    }

    #[test]
    fn catalog_lookup_returns_exact_rows() {
        let catalog = ModeCatalog::new(vec![blue30(), red30(), blue15(), red15()]).unwrap();
        let m = catalog.get(30e-6, 167, 1).unwrap();
        assert!((m.wavelength - 778.73e-9).abs() < 1e-15);
        assert!((m.g0 - TWO_PI * 102.6e6).abs() < 1.0);
        let m = catalog.get(15e-6, 79, 1).unwrap();
        assert!((m.wavelength - 799.2e-9).abs() < 1e-15);
        assert!((m.q1 - 1.02e6).abs() < 1.0);
    }

    #[test]
    fn duplicate_rows_rejected() {
        let err = ModeCatalog::new(vec![blue30(), blue30()]);
        assert!(matches!(err, Err(CoreError::DuplicateMode(_))));
    }

    #[test]
    fn kappa_formula() {
        let m = blue30();
        let expected = TWO_PI * C / (2.0 * 3.0e6 * 778.73e-9);
        let got = m.kappa_for_q(3.0e6);
        assert!((got - expected).abs() / expected < 1e-12);
        // frozen value: 4.0314605561e8 rad/s = 2π·64.1627 MHz
        assert!((got - 4.0314605561e8).abs() / 4.0314605561e8 < 1e-9);
    }

    #[test]
    fn invalid_mode_rejected() {
        let mut m = blue30();
        m.g0 = 0.0;
        assert!(ModeCatalog::new(vec![m]).is_err());
    }
}
