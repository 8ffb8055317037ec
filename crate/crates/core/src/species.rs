//! Atomic species data: masses, transitions, polarizability, Zeeman factors.
//!
//! All constants are supplied by the configuration document; nothing here is
//! hardcoded to a particular atom.

use serde::{Deserialize, Serialize};

use crate::constants::{C, TWO_PI};
use crate::error::{CoreError, Result};

/// Which optical transition a mode addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransitionLabel {
    D1,
    D2,
}

/// One optical transition of the species.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Transition {
    pub label: TransitionLabel,
    /// Transition wavelength, m.
    pub wavelength: f64,
    /// Half linewidth Γ, rad/s; 2Γ is the excited-state population decay rate.
    pub half_linewidth: f64,
}

/// Zeeman structure of the trapped ground-state sublevel.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Zeeman {
    pub f: f64,
    pub m_f: f64,
    pub g_f: f64,
}

/// Atomic constants for the trapped species.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomSpecies {
    pub name: String,
    /// Atomic mass, kg.
    pub mass: f64,
    pub transitions: Vec<Transition>,
    /// Static polarizability α₀, C²·m²/J.
    pub static_polarizability: f64,
    /// Mean-square electron radius ⟨r²⟩, m² (vdW numerator (4/3)e²⟨r²⟩).
    pub mean_square_radius: f64,
    pub zeeman: Zeeman,
}

impl AtomSpecies {
    /// Validate all physical invariants.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("mass", self.mass),
            ("static_polarizability", self.static_polarizability),
            ("mean_square_radius", self.mean_square_radius),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(CoreError::NonPositiveConstant(name.to_string()));
            }
        }
        if self.transitions.is_empty() {
            return Err(CoreError::MissingField("transitions".to_string()));
        }
        for t in &self.transitions {
            if !(t.wavelength > 0.0) {
                return Err(CoreError::NonPositiveConstant("wavelength".to_string()));
            }
            if !(t.half_linewidth > 0.0) {
                return Err(CoreError::NonPositiveConstant("half_linewidth".to_string()));
            }
        }
        if let (Some(d1), Some(d2)) = (
            self.transition(TransitionLabel::D1),
            self.transition(TransitionLabel::D2),
        ) {
            if d2.wavelength >= d1.wavelength {
                return Err(CoreError::Config(
                    "D2 wavelength must be shorter than D1".to_string(),
                ));
            }
        }
        Ok(())
    }

    /// Look up one transition by label.
    pub fn transition(&self, label: TransitionLabel) -> Option<&Transition> {
        self.transitions.iter().find(|t| t.label == label)
    }

    /// Detuning of a mode at `lambda_mode` from the labelled transition:
    /// Δ = 2πc(1/λ_mode − 1/λ_atom), rad/s.
    pub fn detuning(&self, label: TransitionLabel, lambda_mode: f64) -> Result<f64> {
        let t = self
            .transition(label)
            .ok_or_else(|| CoreError::MissingField(format!("transition {label:?}")))?;
        Ok(TWO_PI * C * (1.0 / lambda_mode - 1.0 / t.wavelength))
    }
}

/// Load and validate a species from a JSON document.
pub fn load_species(doc: &serde_json::Value) -> Result<AtomSpecies> {
    let species: AtomSpecies = serde_json::from_value(doc.clone())
        .map_err(|e| CoreError::Config(format!("species: {e}")))?;
    species.validate()?;
    Ok(species)
}
