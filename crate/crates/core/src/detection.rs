//! Detection figures of merit: dispersive signal-to-noise, intracavity
//! photon number, spontaneous scattering, recoil heating and Lamb-Dicke
//! survival, and the Raman-transfer audit for magnetic sublevels.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use crate::constants::{HBAR, TWO_PI};
use crate::error::{CoreError, Result};
use crate::species::AtomSpecies;

/// Collected detection figures of merit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectionReport {
    /// Signal-to-noise ratio of the dispersive phase measurement.
    pub s: f64,
    /// Whether the (far-detuned, low-saturation) validity conditions held.
    pub in_regime: bool,
    /// Integration time, s.
    pub tau: f64,
    /// Input photon flux |A_in|², photons/s.
    pub a_in_squared: f64,
    /// Intracavity photon number of the probe mode.
    pub n_cavity: f64,
    /// Spontaneously scattered photons during τ (both fields).
    pub m_scattered: f64,
    /// Probability of leaving the motional ground state during τ.
    pub p_heating: f64,
    /// Raman-transfer audit (None when no magnetic trap is configured).
    pub raman: Option<RamanRecord>,
}

/// Raman transfer between magnetic sublevels driven by the trap light.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RamanRecord {
    /// Effective two-photon Rabi frequency Ω_eff = N·g²/Δ, rad/s.
    pub omega_eff: f64,
    /// Zeeman splitting δ = ΔE/ħ, rad/s.
    pub delta: f64,
    /// Transfer fraction Ω_eff²/(Ω_eff²+δ²).
    pub transfer_fraction: f64,
    /// Spin-flip time t_flip = π/(2Ω_eff), s.
    pub t_flip: f64,
    /// True when Ω_eff is comparable to or exceeds δ: magnetic trapping
    /// would be scrambled by the trap light.
    pub unsafe_for_magnetic_trap: bool,
}

/// S = 4√τ·|A_in|·κ_T·g²/(Δ·κ²) with a regime check
/// (|Δ| ≫ Γ, κ and ρ₁₁ < 0.05).
pub fn snr(
    tau: f64,
    a_in: f64,
    kappa_t: f64,
    kappa: f64,
    delta: f64,
    g: f64,
    gamma: f64,
    rho11: f64,
) -> (f64, bool) {
    let s = 4.0 * tau.sqrt() * a_in * kappa_t * g * g / (delta * kappa * kappa);
    let in_regime = delta.abs() > 20.0 * gamma && delta.abs() > 20.0 * kappa && rho11 < 0.05;
    (s.abs(), in_regime)
}

/// Intracavity photon number N = 2|A_in|²κ_T/κ².
pub fn cavity_photons(a_in_squared: f64, kappa_t: f64, kappa: f64) -> Result<f64> {
    if kappa <= 0.0 {
        return Err(CoreError::NonPositiveConstant("kappa".to_string()));
    }
    Ok(2.0 * a_in_squared * kappa_t / (kappa * kappa))
}

/// Input flux required for a target S (inverse of `snr`).
pub fn required_input_flux(
    s_target: f64,
    tau: f64,
    kappa_t: f64,
    kappa: f64,
    delta: f64,
    g: f64,
) -> f64 {
    let a_in = s_target * delta.abs() * kappa * kappa / (4.0 * tau.sqrt() * kappa_t * g * g);
    a_in * a_in
}

/// M = Σ_i 2Γ_i·τ·ρ₁₁,i over the participating fields.
pub fn scattered_photons(contributions: &[(f64, f64)], tau: f64) -> f64 {
    contributions
        .iter()
        .map(|&(gamma, rho11)| 2.0 * gamma * tau * rho11)
        .sum()
}

/// Photon recoil energy ħ²k²/2m, J.
pub fn recoil_energy(species: &AtomSpecies, lambda: f64) -> f64 {
    let k = TWO_PI / lambda;
    HBAR * HBAR * k * k / (2.0 * species.mass)
}

/// Lamb-Dicke survival: P₀ per emission and P_other = 1 − P₀^M.
///
/// r₀ = √(ħ/2m·(1/ω_x+1/ω_y+1/ω_z)); P₀ = (√π/2)·erf(kr₀)/(kr₀).
pub fn ground_state_survival(
    frequencies: [f64; 3],
    species: &AtomSpecies,
    lambda: f64,
    m_scattered: f64,
) -> Result<(f64, f64)> {
    if frequencies.iter().any(|&w| w <= 0.0) {
        return Err(CoreError::OutOfRange(
            "all trap frequencies must be positive".to_string(),
        ));
    }
    let r0 = (HBAR / (2.0 * species.mass)
        * frequencies.iter().map(|w| 1.0 / w).sum::<f64>())
    .sqrt();
    let kr0 = TWO_PI / lambda * r0;
    let p0 = if kr0 < 1e-8 {
        1.0 - kr0 * kr0 / 3.0
    } else {
        0.5 * std::f64::consts::PI.sqrt() * erf(kr0) / kr0
    };
    let p_other = 1.0 - p0.powf(m_scattered);
    Ok((p0, p_other))
}

/// Linearized heating probability M·(1−P₀), the small-probability expansion
/// of 1 − P₀^M.
pub fn heating_linearized(p0: f64, m_scattered: f64) -> f64 {
    m_scattered * (1.0 - p0)
}

/// Raman-transfer audit: Ω_eff = N·g²/Δ against the Zeeman splitting δ.
pub fn raman_assessment(
    n_photons: f64,
    g: f64,
    delta_light: f64,
    zeeman_splitting: f64,
) -> Result<RamanRecord> {
    if delta_light == 0.0 {
        return Err(CoreError::OutOfRange("zero detuning".to_string()));
    }
    let omega_eff = (n_photons * g * g / delta_light).abs();
    let delta = zeeman_splitting / HBAR;
    let transfer_fraction = if omega_eff == 0.0 && delta == 0.0 {
        0.0
    } else {
        omega_eff * omega_eff / (omega_eff * omega_eff + delta * delta)
    };
    let t_flip = if omega_eff > 0.0 {
        std::f64::consts::PI / (2.0 * omega_eff)
    } else {
        f64::INFINITY
    };
    Ok(RamanRecord {
        omega_eff,
        delta,
        transfer_fraction,
        t_flip,
        unsafe_for_magnetic_trap: omega_eff >= 0.3 * delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::KB;
    use crate::species::tests::rb87;

    #[test]
    fn snr_unit_reduction() {
        // κ_T=κ, g²=Δκ, τ=1, |A_in|=1 → S=4
        let kappa = 2.0_f64;
        let delta = 8.0_f64;
        let g = (delta * kappa).sqrt();
        let (s, _) = snr(1.0, 1.0, kappa, kappa, delta, g, 1e-3, 0.0);
        assert!((s - 4.0).abs() < 1e-12);
        let (s, _) = snr(1.0, 1.0, kappa, kappa, delta, 0.0, 1e-3, 0.0);
        assert_eq!(s, 0.0);
    }

    #[test]
    fn snr_scaling_linearity() {
        let base = snr(1e-5, 1e6, 5e7, 6e7, 5e12, 2e8, 2e7, 1e-3).0;
        let double_ain = snr(1e-5, 2e6, 5e7, 6e7, 5e12, 2e8, 2e7, 1e-3).0;
        assert!((double_ain / base - 2.0).abs() < 1e-12);
        let quad_tau = snr(4e-5, 1e6, 5e7, 6e7, 5e12, 2e8, 2e7, 1e-3).0;
        assert!((quad_tau / base - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cavity_photons_reduction() {
        assert_eq!(cavity_photons(0.0, 1e8, 1e8).unwrap(), 0.0);
        let n = cavity_photons(1e13, 1e8, 1e8).unwrap();
        assert!((n - 2e5).abs() / 2e5 < 1e-12);
        // N scales linearly in |A_in|²
        let n2 = cavity_photons(2e13, 1e8, 1e8).unwrap();
        assert!((n2 / n - 2.0).abs() < 1e-12);
    }

    #[test]
    fn flux_inversion_round_trip() {
        let (tau, kt, k, delta, g, s0) = (1e-5, 7.2e7, 8.0e7, 4.68e12, 2e8, 10.0);
        let ain2 = required_input_flux(s0, tau, kt, k, delta, g);
        let (s, _) = snr(tau, ain2.sqrt(), kt, k, delta, g, 2e7, 1e-3);
        assert!((s - s0).abs() / s0 < 1e-12);
    }

    #[test]
    fn scattered_photons_reference() {
        assert_eq!(scattered_photons(&[(1e7, 0.01)], 0.0), 0.0);
        // frozen: 2Γτρ₁₁ with Γ=2π·3.03 MHz, ρ₁₁=0.01, τ=75 µs
        let m = scattered_photons(&[(TWO_PI * 3.03e6, 0.01)], 75e-6);
        assert!((m - 28.557077).abs() < 1e-4, "{m}");
        // additivity over fields
        let m2 = scattered_photons(&[(TWO_PI * 3.03e6, 0.01), (TWO_PI * 2.875e6, 0.02)], 75e-6);
        let mb = scattered_photons(&[(TWO_PI * 2.875e6, 0.02)], 75e-6);
        assert!((m2 - m - mb).abs() < 1e-12);
    }

    #[test]
    fn recoil_energy_reference() {
        let s = rb87();
        let er = recoil_energy(&s, 780e-9);
        // frozen: 2.500219820e-30 J = 0.181090 µK
        assert!((er - 2.500219820e-30).abs() / 2.5e-30 < 1e-8);
        assert!((er / KB * 1e6 - 0.181090).abs() < 1e-5);
        // k² scaling
        let er2 = recoil_energy(&s, 1560e-9);
        assert!((er / er2 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn survival_limits_and_reference() {
        let s = rb87();
        // Lamb-Dicke limit: stiff trap → P₀ → 1
        let (p0, pother) = ground_state_survival([1e12, 1e12, 1e12], &s, 780e-9, 10.0).unwrap();
        assert!(p0 > 0.999 && pother < 1e-2);
        // kr₀ = 1 → P₀ = (√π/2)·erf(1) = 0.746824133 (frozen); isotropic
        // frequencies ω = 3ħk²/2m give r₀ = 1/k exactly
        let k = TWO_PI / 780e-9;
        let omega = 3.0 * HBAR * k * k / (2.0 * s.mass);
        let (p0, _) = ground_state_survival([omega, omega, omega], &s, 780e-9, 1.0).unwrap();
        assert!((p0 - 0.746824133).abs() < 1e-8, "{p0}");
        assert!(ground_state_survival([0.0, 1.0, 1.0], &s, 780e-9, 1.0).is_err());
    }

    #[test]
    fn linearized_heating_agrees_when_small() {
        let p0 = 0.995_f64;
        for m in [1.0, 3.0, 10.0] {
            let exact = 1.0 - p0.powf(m);
            let lin = heating_linearized(p0, m);
            if exact < 0.1 {
                assert!((lin - exact).abs() / exact < 0.10, "m={m}: {lin} vs {exact}");
            }
        }
    }

    #[test]
    fn raman_symmetric_point() {
        let r = raman_assessment(0.0, 1e8, 1e12, 1e-25).unwrap();
        assert_eq!(r.omega_eff, 0.0);
        assert_eq!(r.transfer_fraction, 0.0);
        // Ω_eff = δ → transfer = 1/2
        let delta_e = HBAR * 1e8; // δ = 1e8 rad/s
        let n = 1e8 * 1e12 / (1e8_f64 * 1e8); // N·g²/Δ = 1e8
        let r = raman_assessment(n, 1e8, 1e12, delta_e).unwrap();
        assert!((r.omega_eff - r.delta).abs() / r.delta < 1e-9);
        assert!((r.transfer_fraction - 0.5).abs() < 1e-9);
        assert!(r.unsafe_for_magnetic_trap);
        assert!(raman_assessment(1.0, 1e8, 0.0, delta_e).is_err());
    }
}
