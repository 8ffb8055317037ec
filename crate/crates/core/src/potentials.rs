//! Potential-energy contributions on the atom: optical dipole terms from the
//! two-level steady state, the stitched van-der-Waals / Casimir-Polder
//! atom-surface attraction, and the current-carrying-wire magnetic trap.
//!
//! The combined potential is the sum V = V_light + V_AS + V_mag.

use serde::{Deserialize, Serialize};

use crate::constants::{C, EPS0, E_CHARGE, HBAR, MU0, MU_B};
use crate::error::{CoreError, Result};
use crate::species::AtomSpecies;

/// Steady-state solution of the driven two-level atom.
#[derive(Debug, Clone, Copy)]
pub struct TwoLevelSteadyState {
    /// Excited-state population ρ₁₁ ∈ [0, 1/2).
    pub rho11: f64,
    /// Coherence magnitude |ρ₀₁|.
    pub rho01_magnitude: f64,
    /// Detuning Δ, rad/s.
    pub detuning: f64,
}

/// ρ₁₁ = ½Ω²/(Ω²+2Δ²+2Γ²), |ρ₀₁| = Ω√(Γ²+Δ²)/(Ω²+2Δ²+2Γ²).
pub fn steady_state(omega: f64, delta: f64, gamma: f64) -> TwoLevelSteadyState {
    let denom = omega * omega + 2.0 * delta * delta + 2.0 * gamma * gamma;
    TwoLevelSteadyState {
        rho11: 0.5 * omega * omega / denom,
        rho01_magnitude: omega * (gamma * gamma + delta * delta).sqrt() / denom,
        detuning: delta,
    }
}

/// Adiabatic dipole potential, exact form:
/// V = (ħΔ/2)·ln(1 + Ω²/(2Γ²+2Δ²)), J.
pub fn optical_potential_exact(omega: f64, delta: f64, gamma: f64) -> f64 {
    0.5 * HBAR * delta * (omega * omega / (2.0 * gamma * gamma + 2.0 * delta * delta)).ln_1p()
}

/// Far-detuned dipole potential V = ħΩ²/(4Δ), J.
pub fn optical_potential_fardetuned(omega: f64, delta: f64) -> Result<f64> {
    if delta == 0.0 {
        return Err(CoreError::OutOfRange("zero detuning".to_string()));
    }
    Ok(HBAR * omega * omega / (4.0 * delta))
}

/// Radial light force from a potential evaluator by central difference, N.
/// Positive values point away from the surface.
pub fn light_force(potential: &dyn Fn(f64) -> f64, r: f64, h: f64) -> Result<f64> {
    if r - h <= 0.0 {
        return Err(CoreError::OutOfDomain(format!("force step straddles r=0 at r={r}")));
    }
    Ok(-(potential(r + h) - potential(r - h)) / (2.0 * h))
}

/// Pure van-der-Waals asymptote
/// V = −((n²−1)/(n²+1))·(4/3)e²⟨r²⟩/(8πε₀(2r)³), J.
pub fn vdw_potential(r: f64, species: &AtomSpecies, n: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(CoreError::OutOfDomain(format!("r = {r} <= 0")));
    }
    Ok(-vdw_c3(species, n) / (r * r * r))
}

/// vdW coefficient C₃ in V = −C₃/r³, J·m³.
pub fn vdw_c3(species: &AtomSpecies, n: f64) -> f64 {
    let phi = (n * n - 1.0) / (n * n + 1.0);
    phi * (4.0 / 3.0) * E_CHARGE * E_CHARGE * species.mean_square_radius
        / (8.0 * std::f64::consts::PI * EPS0 * 8.0)
}

/// Retarded Casimir-Polder asymptote
/// V = −α₀ħc·(2c₄∥+c₄⊥)/(2π²ε₀(2r)⁴), J. `c4_combined` = 2c₄∥+c₄⊥.
pub fn casimir_polder_potential(r: f64, species: &AtomSpecies, c4_combined: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(CoreError::OutOfDomain(format!("r = {r} <= 0")));
    }
    Ok(-cp_c4(species, c4_combined) / (r * r * r * r))
}

/// CP coefficient C₄ in V = −C₄/r⁴, J·m⁴.
pub fn cp_c4(species: &AtomSpecies, c4_combined: f64) -> f64 {
    species.static_polarizability * HBAR * C * c4_combined
        / (2.0 * std::f64::consts::PI * std::f64::consts::PI * EPS0 * 16.0)
}

/// Stitched atom-surface model: the short-range branch follows the vdW
/// force, the long-range branch the CP force, joined at the radius where
/// the two force asymptotes cross, with V(∞) = 0.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub c3: f64,
    pub c4: f64,
    /// Force-crossover radius r_c = (4/3)·C₄/C₃, m.
    pub crossover: f64,
}

impl SurfaceModel {
    pub fn new(species: &AtomSpecies, c4_combined: f64, n: f64) -> Self {
        let c3 = vdw_c3(species, n);
        let c4 = cp_c4(species, c4_combined);
        Self {
            c3,
            c4,
            crossover: (4.0 / 3.0) * c4 / c3,
        }
    }

    /// Stitched potential, J; continuous with continuous force.
    pub fn potential(&self, r: f64) -> Result<f64> {
        if r <= 0.0 {
            return Err(CoreError::OutOfDomain(format!("r = {r} <= 0")));
        }
        let rc = self.crossover;
        if r >= rc {
            Ok(-self.c4 / r.powi(4))
        } else {
            Ok(-self.c4 / rc.powi(4) + self.c3 / rc.powi(3) - self.c3 / r.powi(3))
        }
    }

    /// Attractive force magnitude |dV/dr|, N.
    pub fn force(&self, r: f64) -> Result<f64> {
        if r <= 0.0 {
            return Err(CoreError::OutOfDomain(format!("r = {r} <= 0")));
        }
        if r >= self.crossover {
            Ok(4.0 * self.c4 / r.powi(5))
        } else {
            Ok(3.0 * self.c3 / r.powi(4))
        }
    }
}

/// Magnetic field of a wire along y plus bias fields, Tesla, at (x, z).
/// B = μ₀I/(2π)·(z x̂ − x ẑ)/(x²+z²) − B₀ x̂ + B_offset ŷ.
pub fn magnetic_field(x: f64, z: f64, current: f64, b0: f64, b_offset: f64) -> Result<[f64; 3]> {
    let r2 = x * x + z * z;
    if r2 == 0.0 {
        return Err(CoreError::OutOfDomain("on the wire axis".to_string()));
    }
    let pref = MU0 * current / (2.0 * std::f64::consts::PI * r2);
    Ok([pref * z - b0, b_offset, -pref * x])
}

/// Wire-trap summary: harmonic frequency, Zeeman splitting, and the maximum
/// confining force, in the engineering form B ≈ 2·10⁻³ I[A]/r[m] Gauss used
/// for chip-trap estimates.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MagneticTrap {
    /// Wire current, A.
    pub current: f64,
    /// Trap height above the wire, m.
    pub z0: f64,
    /// Harmonic oscillation frequency, rad/s.
    pub omega_ho: f64,
    /// Zeeman splitting between adjacent m_F levels, J.
    pub delta_e: f64,
    /// Maximum confining force, N.
    pub f_max: f64,
    /// m_F·g_F·μ_B prefactor, J/T.
    pub moment: f64,
    /// Atomic mass, kg.
    pub mass: f64,
}

/// Engineering wire-field magnitude 2·10⁻⁷·I/r in Tesla (2·10⁻³ I/r Gauss).
fn wire_field(current: f64, r: f64) -> f64 {
    2e-7 * current / r
}

pub fn magnetic_trap(species: &AtomSpecies, current: f64, z0: f64) -> Result<MagneticTrap> {
    let z = &species.zeeman;
    let moment = z.m_f * z.g_f * MU_B;
    if moment <= 0.0 {
        return Err(CoreError::OutOfRange(
            "anti-trapped state: m_F·g_F must be positive".to_string(),
        ));
    }
    if current <= 0.0 || z0 <= 0.0 {
        return Err(CoreError::NonPositiveConstant("wire current / height".to_string()));
    }
    let omega_ho = (1.0 / z0) * (wire_field(current, z0) * moment / species.mass).sqrt();
    // splitting between adjacent m_F levels in the bias field that places
    // the trap at z0
    let delta_e = z.g_f * MU_B * wire_field(current, z0);
    let f_max = moment * wire_field(current, z0) / z0;
    Ok(MagneticTrap {
        current,
        z0,
        omega_ho,
        delta_e,
        f_max,
        moment,
        mass: species.mass,
    })
}

impl MagneticTrap {
    /// Harmonic expansion about the trap center: V(δ) = ½mω²δ², J.
    pub fn potential(&self, delta_r: f64) -> f64 {
        0.5 * self.mass * self.omega_ho * self.omega_ho * delta_r * delta_r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{KB, PLANCK, TWO_PI};
    use crate::species::tests::rb87;
    use crate::units::newton_to_uk_per_nm;

    #[test]
    fn steady_state_limits() {
        assert_eq!(steady_state(0.0, 1e9, 1e7).rho11, 0.0);
        // saturation: Δ=0, Ω ≫ Γ → ρ₁₁ → 1/2 from below
        let s = steady_state(1e9, 0.0, 1e6);
        assert!(s.rho11 < 0.5 && s.rho11 > 0.4999);
        // Ω = 2Γ, Δ = 0 → 1/3
        let s = steady_state(2e7, 0.0, 1e7);
        assert!((s.rho11 - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn exact_potential_reference_value() {
        // frozen: V(Ω=2π·68.4 GHz, Δ=2π·746 GHz, Γ=2π·3.03 MHz)
        let v = optical_potential_exact(TWO_PI * 68.4e9, TWO_PI * 746e9, TWO_PI * 3.03e6);
        assert!((v - 1.036712282e-24).abs() / 1.036712282e-24 < 1e-9);
        assert!(v > 0.0);
        assert_eq!(optical_potential_exact(0.0, 1e12, 1e7), 0.0);
    }

    #[test]
    fn exact_approaches_fardetuned() {
        let (omega, delta, gamma) = (2e11, 5e12, 2e7);
        let exact = optical_potential_exact(omega, delta, gamma);
        let far = optical_potential_fardetuned(omega, delta).unwrap();
        let bound = omega * omega / (4.0 * delta * delta);
        assert!((exact - far).abs() / far.abs() < bound);
        // sign convention and quadratic scaling
        assert!(optical_potential_fardetuned(1e9, -5e12).unwrap() < 0.0);
        let base = optical_potential_fardetuned(1e9, 5e12).unwrap();
        let quad = optical_potential_fardetuned(2e9, 5e12).unwrap();
        assert!((quad / base - 4.0).abs() < 1e-12);
        assert!(optical_potential_fardetuned(1e9, 0.0).is_err());
    }

    #[test]
    fn taylor_bound_property() {
        for &(omega, delta) in &[(1e9_f64, 4e12_f64), (5e10, -8e12), (2e11, 2.8e13)] {
            let gamma = 2e7;
            let exact = optical_potential_exact(omega, delta, gamma);
            let far = optical_potential_fardetuned(omega, delta).unwrap();
            let rel_bound = omega * omega / (2.0 * gamma * gamma + 2.0 * delta * delta);
            assert!((exact - far).abs() / far.abs() <= rel_bound);
        }
    }

    #[test]
    fn light_force_matches_exponential_analytic() {
        let v0 = 1e-26;
        let alpha = 15.4e6;
        let v = move |r: f64| v0 * (-alpha * r).exp();
        let r = 120e-9;
        let h = 0.001 / alpha;
        let f = light_force(&v, r, h).unwrap();
        let analytic = alpha * v0 * (-alpha * r).exp();
        assert!((f - analytic).abs() / analytic < 1e-6);
        assert!(light_force(&v, 1e-12, 1e-9).is_err());
    }

    #[test]
    fn vdw_power_law_and_reference() {
        let s = rb87();
        let n = 1.454;
        let v1 = vdw_potential(70e-9, &s, n).unwrap();
        let v2 = vdw_potential(140e-9, &s, n).unwrap();
        assert!((v2 / v1 - 0.125).abs() < 1e-12);
        assert!(vdw_potential(50e-9, &s, 1.0).unwrap().abs() < 1e-40);
        // frozen: V_vdW(50 nm) and C₃
        let v = vdw_potential(50e-9, &s, n).unwrap();
        assert!((v + 7.011004122e-27).abs() / 7.011004122e-27 < 1e-8, "{v}");
        assert!((vdw_c3(&s, n) - 8.763755152e-49).abs() / 8.763755152e-49 < 1e-8);
    }

    #[test]
    fn cp_power_law_and_reference() {
        let s = rb87();
        let combo = 1.3952763481;
        let v1 = casimir_polder_potential(100e-9, &s, combo).unwrap();
        let v2 = casimir_polder_potential(200e-9, &s, combo).unwrap();
        assert!((v2 / v1 - 1.0 / 16.0).abs() < 1e-12);
        assert!(casimir_polder_potential(100e-9, &s, 0.0).unwrap() == 0.0);
        // frozen: V_CP(300 nm) and C₄
        let v = casimir_polder_potential(300e-9, &s, combo).unwrap();
        assert!((v + 1.024375936e-29).abs() / 1.024375936e-29 < 1e-8);
        assert!((cp_c4(&s, combo) - 8.297445083e-56).abs() / 8.297445083e-56 < 1e-8);
    }

    #[test]
    fn surface_model_stitching() {
        let s = rb87();
        let model = SurfaceModel::new(&s, 1.3952763481, 1.454);
        // frozen crossover radius
        assert!((model.crossover - 126.238809e-9).abs() < 1e-13);
        // short-range force is the vdW branch, long-range the CP branch
        let f50 = model.force(50e-9).unwrap();
        assert!((f50 - 4.206602e-19).abs() / 4.206602e-19 < 1e-6);
        assert!((newton_to_uk_per_nm(f50) - 30.4683).abs() < 1e-3);
        let f300 = model.force(300e-9).unwrap();
        assert!((f300 - 1.365835e-22).abs() / 1.365835e-22 < 1e-6);
        // force continuous at the crossover
        let rc = model.crossover;
        let below = 3.0 * model.c3 / (rc).powi(4);
        let above = 4.0 * model.c4 / (rc).powi(5);
        assert!((below - above).abs() / above < 1e-9);
        // potential continuous at crossover, attractive everywhere, →0 far away
        let eps = 1e-15;
        let v_lo = model.potential(rc - eps).unwrap();
        let v_hi = model.potential(rc + eps).unwrap();
        assert!((v_lo - v_hi).abs() / v_hi.abs() < 1e-6);
        assert!(model.potential(5e-6).unwrap().abs() / KB < 1e-9);
        for &r in &[20e-9, 80e-9, 126e-9, 200e-9, 1e-6] {
            assert!(model.potential(r).unwrap() < 0.0);
        }
    }

    #[test]
    fn power_law_slopes_loglog() {
        let s = rb87();
        let n = 1.454;
        // slope of ln|V| vs ln r on exact evaluations
        let slope = |f: &dyn Fn(f64) -> f64| {
            let (r1, r2) = (60e-9, 240e-9);
            (f(r2).abs().ln() - f(r1).abs().ln()) / (r2.ln() - r1.ln())
        };
        let sv = slope(&|r| vdw_potential(r, &s, n).unwrap());
        assert!((sv + 3.0).abs() < 1e-9, "{sv}");
        let sc = slope(&|r| casimir_polder_potential(r, &s, 1.3952763481).unwrap());
        assert!((sc + 4.0).abs() < 1e-9, "{sc}");
    }

    #[test]
    fn wire_field_geometry() {
        // above the wire at z₀ = μ₀I/(2πB₀) the x-component cancels
        let (current, b0) = (0.1, 1e-3);
        let z0 = MU0 * current / (2.0 * std::f64::consts::PI * b0);
        let b = magnetic_field(0.0, z0, current, b0, 2e-4).unwrap();
        assert!(b[0].abs() < 1e-18);
        assert!((b[1] - 2e-4).abs() < 1e-18);
        assert!(b[2].abs() < 1e-18);
        assert!(magnetic_field(0.0, 0.0, 1.0, 0.0, 0.0).is_err());
        // engineering form 2e-3·I/r Gauss matches SI to < 0.1%
        let b_si = (MU0 * current / (2.0 * std::f64::consts::PI * z0)).abs();
        let b_eng = 2e-7 * current / z0;
        assert!((b_si - b_eng).abs() / b_si < 1e-3);
    }

    #[test]
    fn magnetic_trap_reference_point() {
        let s = rb87();
        let t = magnetic_trap(&s, 0.1, 3e-6).unwrap();
        // ω_ho ≈ 2π·35 kHz (closed-form arithmetic gives 34.72 kHz)
        assert!((t.omega_ho / TWO_PI / 1e3 - 34.72).abs() < 0.05, "{}", t.omega_ho);
        // ΔE ≈ 50 MHz·h (46.65 MHz)
        let mhz = t.delta_e / PLANCK / 1e6;
        assert!((mhz - 46.65).abs() < 0.05, "{mhz}");
        // F_max ≈ 1.5 µK/nm (1.4927)
        let f = newton_to_uk_per_nm(t.f_max);
        assert!((f - 1.4927).abs() < 0.005, "{f}");
    }

    #[test]
    fn anti_trapped_state_rejected() {
        let mut s = rb87();
        s.zeeman.m_f = -2.0;
        assert!(magnetic_trap(&s, 0.1, 3e-6).is_err());
    }
}
