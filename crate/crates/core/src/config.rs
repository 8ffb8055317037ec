//! Configuration document and the assembled trap system.
//!
//! A single JSON document supplies the species constants, disk geometry,
//! mode table, surface-interaction data, and per-run trap/detection/sweep
//! settings. `TrapSystem` is the validated, unit-converted assembly that the
//! numerical modules evaluate.

use serde::{Deserialize, Serialize};

use crate::constants::TWO_PI;
use crate::error::{CoreError, Result};
use crate::fields::{mode_decay_rates, FieldProfile};
use crate::modes::{DiskGeometry, ModeCatalog, ModeSpec};
use crate::potentials::{
    magnetic_trap, optical_potential_exact, optical_potential_fardetuned, MagneticTrap,
    SurfaceModel,
};
use crate::species::{AtomSpecies, TransitionLabel};
use crate::trapology::TrapReport;
use crate::units::{nm_to_m, um_to_m};

/// One mode-table row in display units (µm, nm, MHz, 1/µm).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeRow {
    pub d_um: f64,
    pub l: u32,
    #[serde(default = "default_q")]
    pub q: u32,
    pub lambda_nm: f64,
    pub q1: f64,
    pub q2: f64,
    pub g0_mhz: f64,
    /// Decay constant of the evanescent field amplitude, 1/µm.
    pub alpha_per_um: f64,
    pub target: TransitionLabel,
}

fn default_q() -> u32 {
    1
}

impl ModeRow {
    /// Convert to SI. The internal α is the intensity decay constant, twice
    /// the tabulated field-amplitude decay constant.
    pub fn to_mode(&self) -> ModeSpec {
        ModeSpec {
            disk_diameter: um_to_m(self.d_um),
            longitudinal_index: self.l,
            radial_index: self.q,
            wavelength: nm_to_m(self.lambda_nm),
            q1: self.q1,
            q2: self.q2,
            g0: TWO_PI * self.g0_mhz * 1e6,
            alpha: 2.0 * self.alpha_per_um * 1e6,
            target_transition: self.target,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeometryConfig {
    pub diameter_um: f64,
    pub height_um: f64,
    pub gap_um: f64,
    pub refractive_index: f64,
}

impl GeometryConfig {
    pub fn to_geometry(&self) -> DiskGeometry {
        DiskGeometry {
            diameter: um_to_m(self.diameter_um),
            height: um_to_m(self.height_um),
            gap: um_to_m(self.gap_um),
            refractive_index: self.refractive_index,
        }
    }
}

/// Surface-interaction data: tabulated retarded-coefficient combination
/// 2c₄∥+c₄⊥ vs refractive index, linearly interpolated.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurfaceConfig {
    pub c4_table: Vec<[f64; 2]>,
    #[serde(default = "default_true")]
    pub enabled: bool,
}

fn default_true() -> bool {
    true
}

impl SurfaceConfig {
    pub fn c4_combined(&self, n: f64) -> Result<f64> {
        let t = &self.c4_table;
        if t.len() < 2 {
            return Err(CoreError::Config("c4_table needs at least two nodes".to_string()));
        }
        if n <= t[0][0] {
            return Ok(t[0][1]);
        }
        for w in t.windows(2) {
            if n <= w[1][0] {
                let f = (n - w[0][0]) / (w[1][0] - w[0][0]);
                return Ok(w[0][1] + f * (w[1][1] - w[0][1]));
            }
        }
        Ok(t[t.len() - 1][1])
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ModeRef {
    pub d_um: f64,
    pub l: u32,
    #[serde(default = "default_q")]
    pub q: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrapConfig {
    pub blue: ModeRef,
    pub red: ModeRef,
    pub n_blue: f64,
    /// Red photon number; when absent it is solved from `r_target_nm`.
    pub n_red: Option<f64>,
    /// Desired trap-center distance, nm.
    pub r_target_nm: Option<f64>,
    #[serde(default = "default_true")]
    pub standing_wave_red: bool,
    #[serde(default)]
    pub profile: ProfileChoice,
    #[serde(default)]
    pub potential_form: PotentialForm,
    #[serde(default = "default_true")]
    pub include_surface: bool,
    #[serde(default)]
    pub include_magnetic: bool,
    pub tau_us: f64,
    #[serde(default = "default_window")]
    pub search_window_nm: [f64; 2],
}

fn default_window() -> [f64; 2] {
    [10.0, 1000.0]
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileChoice {
    #[default]
    Exponential,
    Hankel,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialForm {
    #[default]
    Exact,
    FarDetuned,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MagneticConfig {
    pub current_a: f64,
    pub z0_um: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DetectConfig {
    /// Target signal-to-noise for the required-input-flux estimate.
    pub s_target: Option<f64>,
    /// Atom distance for the standalone estimate, nm (trap center if absent).
    pub atom_distance_nm: Option<f64>,
    pub tau_us: Option<f64>,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig { s_target: None, atom_distance_nm: None, tau_us: None }
    }
}

/// Feasibility thresholds for the sweep engine.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FeasibilitySpec {
    pub s_min: f64,
    pub heating_max: f64,
    pub tunnel_max: f64,
    pub tolerance: f64,
}

impl Default for FeasibilitySpec {
    fn default() -> Self {
        FeasibilitySpec { s_min: 5.0, heating_max: 0.05, tunnel_max: 0.02, tolerance: 0.02 }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AxisConfig {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(default)]
    pub mode: SweepMode,
    pub n_b: AxisConfig,
    pub r_nm: AxisConfig,
    /// Red-photon axis for the red-scan mode.
    pub n_r: Option<AxisConfig>,
    /// Blue-photon family for the red-scan mode (one curve per value).
    pub n_b_values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    #[default]
    Grid,
    RedScan,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            mode: SweepMode::Grid,
            n_b: AxisConfig { min: 1e5, max: 1e6, steps: 60 },
            r_nm: AxisConfig { min: 80.0, max: 200.0, steps: 60 },
            n_r: None,
            n_b_values: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BackscatterConfig {
    pub epsilon_over_kappa_int: f64,
    /// Depth-fluctuation budget (±fraction), e.g. 0.02 for ±2%.
    pub budget: f64,
}

impl Default for BackscatterConfig {
    fn default() -> Self {
        BackscatterConfig { epsilon_over_kappa_int: 1.0, budget: 0.02 }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScanConfig {
    pub r_start_nm: f64,
    pub r_stop_nm: f64,
    pub steps: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { r_start_nm: 20.0, r_stop_nm: 500.0, steps: 480 }
    }
}

/// The full configuration document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Config {
    pub species: AtomSpecies,
    pub geometry: GeometryConfig,
    pub modes: Vec<ModeRow>,
    pub surface: SurfaceConfig,
    #[serde(default = "default_coupling_decay")]
    pub coupling_decay_per_um: f64,
    pub trap: TrapConfig,
    pub magnetic: Option<MagneticConfig>,
    #[serde(default)]
    pub detect: DetectConfig,
    #[serde(default)]
    pub feasibility: FeasibilitySpec,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub backscatter: BackscatterConfig,
    #[serde(default)]
    pub potential_scan: ScanConfig,
}

fn default_coupling_decay() -> f64 {
    17.0
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config =
            serde_json::from_str(text).map_err(|e| CoreError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.species.validate()?;
        self.geometry.to_geometry().validate()?;
        self.catalog()?;
        if !(self.trap.tau_us > 0.0) {
            return Err(CoreError::NonPositiveConstant("tau_us".to_string()));
        }
        if !(self.trap.n_blue >= 0.0) {
            return Err(CoreError::NonPositiveConstant("n_blue".to_string()));
        }
        Ok(())
    }

    pub fn catalog(&self) -> Result<ModeCatalog> {
        ModeCatalog::new(self.modes.iter().map(|r| r.to_mode()).collect())
    }

    /// Assemble the trap system. The red photon number defaults to 0 when
    /// unset (the sweep module solves it from `r_target_nm`).
    pub fn system(&self) -> Result<TrapSystem> {
        let catalog = self.catalog()?;
        let geometry = self.geometry.to_geometry();
        let blue_mode = catalog
            .get(um_to_m(self.trap.blue.d_um), self.trap.blue.l, self.trap.blue.q)?
            .clone();
        let red_mode = catalog
            .get(um_to_m(self.trap.red.d_um), self.trap.red.l, self.trap.red.q)?
            .clone();
        let delta_blue = self
            .species
            .detuning(blue_mode.target_transition, blue_mode.wavelength)?;
        let delta_red = self
            .species
            .detuning(red_mode.target_transition, red_mode.wavelength)?;
        if delta_blue <= 0.0 || delta_red >= 0.0 {
            return Err(CoreError::SameSignDetunings);
        }
        let gamma_blue = self
            .species
            .transition(blue_mode.target_transition)
            .unwrap()
            .half_linewidth;
        let gamma_red = self
            .species
            .transition(red_mode.target_transition)
            .unwrap()
            .half_linewidth;
        let n_red = self.trap.n_red.unwrap_or(0.0);
        let (blue, red) = match self.trap.profile {
            ProfileChoice::Exponential => (
                FieldProfile::exponential(blue_mode, self.trap.n_blue, false),
                FieldProfile::exponential(red_mode, n_red, self.trap.standing_wave_red),
            ),
            ProfileChoice::Hankel => (
                FieldProfile::hankel(blue_mode, self.trap.n_blue, false, geometry.radius())?,
                FieldProfile::hankel(red_mode, n_red, self.trap.standing_wave_red, geometry.radius())?,
            ),
        };
        let surface = if self.trap.include_surface && self.surface.enabled {
            let combo = self.surface.c4_combined(geometry.refractive_index)?;
            Some(SurfaceModel::new(&self.species, combo, geometry.refractive_index))
        } else {
            None
        };
        let magnetic = match (&self.magnetic, self.trap.include_magnetic) {
            (Some(m), true) => {
                Some(magnetic_trap(&self.species, m.current_a, um_to_m(m.z0_um))?)
            }
            _ => None,
        };
        Ok(TrapSystem {
            species: self.species.clone(),
            geometry,
            blue,
            red,
            delta_blue,
            delta_red,
            gamma_blue,
            gamma_red,
            surface,
            magnetic,
            exact_form: matches!(self.trap.potential_form, PotentialForm::Exact),
            tau: self.trap.tau_us * 1e-6,
            coupling_decay: self.coupling_decay_per_um * 1e6,
            window: (
                nm_to_m(self.trap.search_window_nm[0]),
                nm_to_m(self.trap.search_window_nm[1]),
            ),
        })
    }
}

/// Validated, SI-unit trap system ready for evaluation.
#[derive(Debug, Clone)]
pub struct TrapSystem {
    pub species: AtomSpecies,
    pub geometry: DiskGeometry,
    pub blue: FieldProfile,
    pub red: FieldProfile,
    /// Blue detuning (> 0), rad/s.
    pub delta_blue: f64,
    /// Red detuning (< 0), rad/s.
    pub delta_red: f64,
    pub gamma_blue: f64,
    pub gamma_red: f64,
    pub surface: Option<SurfaceModel>,
    pub magnetic: Option<MagneticTrap>,
    /// Exact log-form dipole potential when true, else ħΩ²/4Δ.
    pub exact_form: bool,
    /// Detection window, s.
    pub tau: f64,
    /// Gap→coupling decay constant γ, 1/m.
    pub coupling_decay: f64,
    /// Radial search window, m.
    pub window: (f64, f64),
}

impl TrapSystem {
    /// Copy with a different red photon number.
    pub fn with_red_photons(&self, n_red: f64) -> Self {
        let mut s = self.clone();
        s.red.photon_number = n_red;
        s
    }

    /// Copy with a different blue photon number.
    pub fn with_blue_photons(&self, n_blue: f64) -> Self {
        let mut s = self.clone();
        s.blue.photon_number = n_blue;
        s
    }

    fn dipole(&self, omega: f64, delta: f64, gamma: f64) -> f64 {
        if self.exact_form {
            optical_potential_exact(omega, delta, gamma)
        } else {
            optical_potential_fardetuned(omega, delta).unwrap_or(0.0)
        }
    }

    /// Peak Rabi frequency of one field at distance r (axial midplane,
    /// tangential antinode), rad/s.
    fn omega_peak(&self, profile: &FieldProfile, r: f64) -> f64 {
        2.0 * profile.mode.g0
            * profile.photon_number.sqrt()
            * profile
                .amplitude_envelope(r)
                .unwrap_or(0.0)
    }

    pub fn potential_blue(&self, r: f64) -> f64 {
        self.dipole(self.omega_peak(&self.blue, r), self.delta_blue, self.gamma_blue)
    }

    pub fn potential_red(&self, r: f64) -> f64 {
        self.dipole(self.omega_peak(&self.red, r), self.delta_red, self.gamma_red)
    }

    pub fn potential_surface(&self, r: f64) -> f64 {
        self.surface
            .as_ref()
            .and_then(|m| m.potential(r).ok())
            .unwrap_or(0.0)
    }

    pub fn potential_magnetic(&self, r: f64) -> f64 {
        self.magnetic.as_ref().map(|m| m.potential(r)).unwrap_or(0.0)
    }

    /// Total radial potential V = V_light + V_AS + V_mag at the trap plane, J.
    pub fn potential_total(&self, r: f64) -> f64 {
        self.potential_blue(r) + self.potential_red(r) + self.potential_surface(r)
            + self.potential_magnetic(r)
    }

    /// Blue-mode decay rates at the configured gap: (κ, κ_T), rad/s.
    pub fn blue_decay_rates(&self) -> Result<(f64, f64)> {
        mode_decay_rates(&self.blue.mode, self.geometry.gap, self.coupling_decay)
    }

    /// Default radial grid: 1 nm cells over the search window.
    pub fn grid_cells(&self) -> usize {
        (((self.window.1 - self.window.0) * 1e9).round() as usize).max(10)
    }

    /// Locate the radial trap of the current configuration.
    pub fn find_trap(&self) -> Result<TrapReport> {
        let f = |r: f64| self.potential_total(r);
        crate::trapology::find_trap(&f, self.window.0, self.window.1, self.grid_cells(), self.species.mass)
    }

    /// Locate and fully characterize the trap: 3D frequencies, ground-state
    /// numbers, and the WKB tunneling probability over the detection window.
    pub fn characterize(&self) -> Result<TrapReport> {
        let mut report = self.find_trap()?;
        if !report.exists {
            return Ok(report);
        }
        self.frequencies_3d(&mut report)?;
        let f = |r: f64| self.potential_total(r);
        let (p, _flagged) =
            crate::trapology::tunneling_probability(&f, &report, self.tau, self.species.mass, self.window.0)?;
        report.tunneling_probability = p;
        Ok(report)
    }

    /// Detection figures of merit for an atom at the trap center, with the
    /// blue mode doubling as the dispersive probe.
    pub fn detection(&self, report: &TrapReport) -> Result<crate::detection::DetectionReport> {
        use crate::detection::*;
        if !report.exists {
            return Err(CoreError::NoTrap("no trap to probe".to_string()));
        }
        let (kappa, kappa_t) = self.blue_decay_rates()?;
        let r = report.r_min;
        let a_in_squared = self.blue.photon_number * kappa * kappa / (2.0 * kappa_t);
        let g = self.blue.g_at(r)?;
        let (rho_b, rho_r) = self.populations(r);
        let (s, in_regime) = snr(
            self.tau,
            a_in_squared.sqrt(),
            kappa_t,
            kappa,
            self.delta_blue,
            g,
            self.gamma_blue,
            rho_b,
        );
        let m_scattered =
            scattered_photons(&[(self.gamma_blue, rho_b), (self.gamma_red, rho_r)], self.tau);
        let (_p0, p_heating) = ground_state_survival(
            report.frequencies,
            &self.species,
            self.blue.mode.wavelength,
            m_scattered,
        )?;
        let raman = match &self.magnetic {
            Some(mag) => Some(raman_assessment(
                self.red.photon_number,
                self.red.g_at(r)?,
                self.delta_red,
                mag.delta_e,
            )?),
            None => None,
        };
        Ok(DetectionReport {
            s,
            in_regime,
            tau: self.tau,
            a_in_squared,
            n_cavity: self.blue.photon_number,
            m_scattered,
            p_heating,
            raman,
        })
    }

    /// Fill the tangential and axial frequencies and ground-state numbers of
    /// a radial trap report.
    ///
    /// ω_z = (π/H)·√(|V_opt|/m) with V_opt the total optical potential at
    /// the trap center; ω_y = (l_r/R)·√(|V_red|/m) for a standing red wave.
    pub fn frequencies_3d(&self, report: &mut TrapReport) -> Result<()> {
        if !report.exists {
            return Err(CoreError::NoTrap("no trap to characterize".to_string()));
        }
        let r = report.r_min;
        let v_opt = self.potential_blue(r) + self.potential_red(r);
        let m = self.species.mass;
        let omega_z =
            std::f64::consts::PI / self.geometry.height * (v_opt.abs() / m).sqrt();
        let omega_y = if self.red.standing_wave {
            self.red.mode.longitudinal_index as f64 / self.geometry.radius()
                * (self.potential_red(r).abs() / m).sqrt()
        } else {
            0.0
        };
        report.frequencies[1] = omega_y;
        report.frequencies[2] = omega_z;
        for i in 0..3 {
            report.ground_state_sizes[i] =
                crate::trapology::ground_state_size(m, report.frequencies[i]);
        }
        report.ground_state_energy =
            0.5 * crate::constants::HBAR * report.frequencies.iter().sum::<f64>();
        Ok(())
    }

    /// Steady-state excited populations (blue, red) at distance r.
    pub fn populations(&self, r: f64) -> (f64, f64) {
        let sb = crate::potentials::steady_state(
            self.omega_peak(&self.blue, r),
            self.delta_blue,
            self.gamma_blue,
        );
        let sr = crate::potentials::steady_state(
            self.omega_peak(&self.red, r),
            self.delta_red,
            self.gamma_red,
        );
        (sb.rho11, sr.rho11)
    }

    /// Comparison of computed forces against the two published reference
    /// figures that are mutually inconsistent with the model equations;
    /// reported, never asserted.
    pub fn discrepancy_report(&self) -> Vec<String> {
        use crate::units::newton_to_uk_per_nm;
        let mut lines = Vec::new();
        if let Some(surface) = &self.surface {
            let f50 = surface.force(50e-9).unwrap_or(f64::NAN);
            let f100 = surface.force(100e-9).unwrap_or(f64::NAN);
            lines.push(format!(
                "surface force: computed {:.3} uK/nm at 50 nm (reference ~3 uK/nm), \
                 {:.3} uK/nm at 100 nm (reference ~1 uK/nm); the r^-4 force scaling \
                 makes the two reference values mutually inconsistent",
                newton_to_uk_per_nm(f50),
                newton_to_uk_per_nm(f100)
            ));
        }
        let h = 0.05e-9;
        let r = 100e-9;
        let f_opt = -(self.potential_blue(r + h) - self.potential_blue(r - h)) / (2.0 * h);
        lines.push(format!(
            "optical force: computed {:.2} uK/nm at 100 nm for the configured blue \
             field (reference estimate ~70 uK/nm)",
            newton_to_uk_per_nm(f_opt)
        ));
        lines
    }
}
