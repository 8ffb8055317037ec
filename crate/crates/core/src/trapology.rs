//! Trap characterization: minimum finding, depth and barrier, 3D harmonic
//! frequencies, ground-state properties, WKB tunneling, and the analytic
//! two-exponential model with its sensitivity formula.
//!
//! Depth convention: the escape depth min(V_barrier, V(∞)=0) − V_min, i.e.
//! the energy needed to leave the trap either over the inner barrier toward
//! the surface or outward to the asymptotically free region, whichever is
//! lower. For configurations whose inner barrier lies below zero the two
//! readings coincide with the barrier-to-minimum difference.

use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, TWO_PI};
use crate::error::{CoreError, Result};

/// Characterization of one radial trap.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TrapReport {
    /// Trap minimum position, m.
    pub r_min: f64,
    /// Potential at the minimum, J.
    pub v_min: f64,
    /// Escape depth, J (see module docs).
    pub depth: f64,
    /// Position of the barrier maximum toward the surface, m.
    pub barrier_position: f64,
    /// Potential at the barrier maximum, J.
    pub v_barrier: f64,
    /// Harmonic frequencies (ω_x, ω_y, ω_z), rad/s; y/z filled by
    /// `frequencies_3d`.
    pub frequencies: [f64; 3],
    /// Ground-state sizes √(ħ/2mω_i), m.
    pub ground_state_sizes: [f64; 3],
    /// Zero-point energy ½ħ(ω_x+ω_y+ω_z), J.
    pub ground_state_energy: f64,
    /// Tunneling probability per detection window.
    pub tunneling_probability: f64,
    /// Whether an interior minimum with positive escape depth exists.
    pub exists: bool,
}

impl TrapReport {
    fn absent() -> Self {
        TrapReport {
            r_min: f64::NAN,
            v_min: f64::NAN,
            depth: 0.0,
            barrier_position: f64::NAN,
            v_barrier: f64::NAN,
            frequencies: [0.0; 3],
            ground_state_sizes: [0.0; 3],
            ground_state_energy: 0.0,
            tunneling_probability: 0.0,
            exists: false,
        }
    }
}

/// Analytic two-exponential model V = V_b0·e^(−α_b r) + V_r0·e^(−α_r r).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ExponentialTrapModel {
    /// Repulsive amplitude, J (> 0).
    pub v_b0: f64,
    /// Attractive amplitude, J (< 0).
    pub v_r0: f64,
    /// Repulsive decay constant, 1/m.
    pub alpha_b: f64,
    /// Attractive decay constant, 1/m.
    pub alpha_r: f64,
}

impl ExponentialTrapModel {
    pub fn potential(&self, r: f64) -> f64 {
        self.v_b0 * (-self.alpha_b * r).exp() + self.v_r0 * (-self.alpha_r * r).exp()
    }

    fn valid(&self) -> bool {
        self.v_b0 > 0.0
            && self.v_r0 < 0.0
            && self.alpha_b > self.alpha_r
            && self.alpha_b * self.v_b0 > self.alpha_r * self.v_r0.abs()
    }
}

fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, iters: u32) -> f64 {
    let gr = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut x1 = b - gr * (b - a);
    let mut x2 = a + gr * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

/// Locate the deepest interior minimum of a radial potential on
/// `[r_lo, r_hi]` and characterize it (radial fields of `TrapReport` only;
/// frequencies other than ω_x are filled by `frequencies_3d`).
///
/// Bracketing grid of `n_grid` cells, refined by golden-section search;
/// barrier = maximum of V on (r_lo, r_min).
pub fn find_trap(
    potential: &dyn Fn(f64) -> f64,
    r_lo: f64,
    r_hi: f64,
    n_grid: usize,
    mass: f64,
) -> Result<TrapReport> {
    let step = (r_hi - r_lo) / n_grid as f64;
    let rs: Vec<f64> = (0..=n_grid).map(|i| r_lo + step * i as f64).collect();
    let vs: Vec<f64> = rs.iter().map(|&r| potential(r)).collect();
    if vs.iter().any(|v| !v.is_finite()) {
        return Err(CoreError::OutOfDomain(
            "non-finite potential in search window".to_string(),
        ));
    }
    // deepest interior local minimum
    let mut imin: Option<usize> = None;
    for i in 1..n_grid {
        if vs[i] < vs[i - 1] && vs[i] < vs[i + 1] && imin.map_or(true, |j| vs[i] < vs[j]) {
            imin = Some(i);
        }
    }
    let Some(imin) = imin else {
        return Ok(TrapReport::absent());
    };
    let r_min = golden_min(potential, rs[imin - 1], rs[imin + 1], 120);
    let v_min = potential(r_min);

    // barrier: maximum of V between the window edge and the minimum
    let ib = (1..=imin)
        .max_by(|&i, &j| vs[i].total_cmp(&vs[j]))
        .unwrap_or(1);
    let neg = |r: f64| -potential(r);
    let barrier_position = golden_min(&neg, rs[ib.saturating_sub(1)], rs[(ib + 1).min(n_grid)], 120);
    let v_barrier = potential(barrier_position);

    // escape depth, capped at the outer asymptote V(∞) = 0
    let depth = v_barrier.min(0.0) - v_min;
    if depth <= 0.0 {
        return Ok(TrapReport::absent());
    }

    let omega_x = radial_frequency(potential, r_min, mass)?;
    Ok(TrapReport {
        r_min,
        v_min,
        depth,
        barrier_position,
        v_barrier,
        frequencies: [omega_x, 0.0, 0.0],
        ground_state_sizes: [ground_state_size(mass, omega_x), 0.0, 0.0],
        ground_state_energy: 0.5 * HBAR * omega_x,
        tunneling_probability: 0.0,
        exists: true,
    })
}

/// ω_x = √(V''(r_min)/m) from a Richardson-extrapolated central second
/// difference (O(h⁴) truncation).
pub fn radial_frequency(potential: &dyn Fn(f64) -> f64, r_min: f64, mass: f64) -> Result<f64> {
    let h = 0.5e-9_f64.min(r_min * 3e-4).max(r_min * 1e-7);
    let v0 = potential(r_min);
    let second = |h: f64| (potential(r_min + h) - 2.0 * v0 + potential(r_min - h)) / (h * h);
    let vpp = (4.0 * second(0.5 * h) - second(h)) / 3.0;
    if vpp <= 0.0 {
        return Err(CoreError::NoTrap(format!(
            "negative curvature at r = {r_min}"
        )));
    }
    Ok((vpp / mass).sqrt())
}

/// √(ħ/2mω), m.
pub fn ground_state_size(mass: f64, omega: f64) -> f64 {
    if omega <= 0.0 {
        return 0.0;
    }
    (HBAR / (2.0 * mass * omega)).sqrt()
}

/// Closed-form minimum of the two-exponential model.
pub struct AnalyticTrap {
    pub r_min: f64,
    pub v_min: f64,
    pub omega: f64,
}

/// r_min = ln(V_b0·α_b/(|V_r0|·α_r))/(α_b−α_r),
/// V(r_min) = −V_b0·e^(−α_b·r_min)·(α_b−α_r)/α_r,
/// ω = √(α_r·α_b·|V(r_min)|/m).
pub fn analytic_trap(model: &ExponentialTrapModel, mass: f64) -> Result<AnalyticTrap> {
    if !model.valid() {
        return Err(CoreError::NoTrap(
            "repulsion must dominate at the surface (V_b0·α_b > |V_r0|·α_r, α_b > α_r)".to_string(),
        ));
    }
    let r_min = ((model.v_b0 * model.alpha_b) / (model.v_r0.abs() * model.alpha_r)).ln()
        / (model.alpha_b - model.alpha_r);
    let v_min = -model.v_b0 * (-model.alpha_b * r_min).exp() * (model.alpha_b - model.alpha_r)
        / model.alpha_r;
    let omega = (model.alpha_r * model.alpha_b * v_min.abs() / mass).sqrt();
    Ok(AnalyticTrap { r_min, v_min, omega })
}

/// δr_min = (δV_r0/|V_r0|)/(α_b−α_r) for a fractional red-intensity change.
pub fn sensitivity(model: &ExponentialTrapModel, delta_fraction: f64) -> Result<f64> {
    if model.alpha_b == model.alpha_r {
        return Err(CoreError::OutOfRange("alpha_b == alpha_r".to_string()));
    }
    Ok(delta_fraction / (model.alpha_b - model.alpha_r))
}

/// WKB transmission through the barrier between the inner turning points at
/// energy E, plus the per-window escape probability with attempt rate
/// ν = ω_x/2π.
pub fn tunneling_probability(
    potential: &dyn Fn(f64) -> f64,
    report: &TrapReport,
    tau: f64,
    mass: f64,
    r_lo: f64,
) -> Result<(f64, bool)> {
    if !report.exists {
        return Ok((0.0, false));
    }
    let energy = report.v_min + report.ground_state_energy;
    if energy >= report.v_barrier {
        // ground state above the barrier: escapes classically
        return Ok((1.0, true));
    }
    // inner classical turning point: V(r) crosses E between r_min and the
    // barrier; outer edge of the forbidden region: V drops below E again on
    // the surface side of the barrier (or the window edge)
    let n_scan = 4000;
    let scan = |a: f64, b: f64, pred: &dyn Fn(f64) -> bool| -> Option<f64> {
        // first crossing walking from a toward b
        let step = (b - a) / n_scan as f64;
        let mut r = a;
        for _ in 0..n_scan {
            let next = r + step;
            if pred(next) {
                return Some(next);
            }
            r = next;
        }
        None
    };
    let r2 = scan(report.r_min, report.barrier_position, &|r| potential(r) >= energy)
        .unwrap_or(report.barrier_position);
    let r1 = scan(report.barrier_position, r_lo, &|r| potential(r) <= energy).unwrap_or(r_lo);
    let (a, b) = (r1.min(r2), r1.max(r2));
    // Simpson quadrature of √(2m(V−E))/ħ over the forbidden region
    let n = 2000;
    let h = (b - a) / n as f64;
    let integrand = |r: f64| {
        let dv = potential(r) - energy;
        if dv > 0.0 { (2.0 * mass * dv).sqrt() / HBAR } else { 0.0 }
    };
    let mut sum = integrand(a) + integrand(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * integrand(a + h * i as f64);
    }
    let action = sum * h / 3.0;
    let transmission = (-2.0 * action).exp();
    let attempt_rate = report.frequencies[0] / TWO_PI;
    let p = 1.0 - (-attempt_rate * transmission * tau).exp();
    Ok((p, false))
}
