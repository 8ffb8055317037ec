//! Parameter sweeps: red-photon solving for a target trap position,
//! depth-vs-red-intensity scans, the (N_b, r) feasibility grid, the
//! recommended operating point, and the intensity-tolerance audit.
//!
//! Grid evaluation is index-ordered and therefore deterministic regardless
//! of the parallel scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{AxisConfig, FeasibilitySpec, TrapSystem};
use crate::error::{CoreError, Result};
use crate::units::{format_sig9, joule_to_mk, m_to_nm, newton_to_uk_per_nm};

/// Acceptable distance between the solved trap position and the requested
/// target, m.
const TARGET_TOLERANCE: f64 = 5e-9;

/// Bisection bracket for the red photon number.
const NR_BRACKET: (f64, f64) = (1e3, 1e7);

/// Solve for the red photon number that places the trap minimum at
/// `r_target` (blue photon number taken from the system).
///
/// Log-space bisection on the sign of dV/dr(r_target); the result is
/// verified to sit at a true minimum (V'' > 0, |F| below 10⁻³ µK/nm).
pub fn solve_red_photons(system: &TrapSystem, r_target: f64) -> Result<f64> {
    if !(50e-9..=300e-9).contains(&r_target) {
        return Err(CoreError::OutOfRange(format!(
            "r_target {} nm outside supported 50..300 nm",
            m_to_nm(r_target)
        )));
    }
    let h = 0.05e-9;
    let slope = |n_r: f64| {
        let s = system.with_red_photons(n_r);
        (s.potential_total(r_target + h) - s.potential_total(r_target - h)) / (2.0 * h)
    };
    let (mut lo, mut hi) = NR_BRACKET;
    let s_lo = slope(lo);
    let s_hi = slope(hi);
    if s_lo >= 0.0 || s_hi <= 0.0 {
        return Err(CoreError::NoTrap(format!(
            "no red photon number in [{:.0e}, {:.0e}] stalls the atom at {} nm",
            NR_BRACKET.0,
            NR_BRACKET.1,
            m_to_nm(r_target)
        )));
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let n_r = (lo * hi).sqrt();
    let solved = system.with_red_photons(n_r);
    let f = |r: f64| solved.potential_total(r);
    crate::trapology::radial_frequency(&f, r_target, system.species.mass)?;
    let force = crate::potentials::light_force(&f, r_target, h)?;
    if newton_to_uk_per_nm(force).abs() > 1e-3 {
        return Err(CoreError::NoTrap(format!(
            "residual force {:.2e} µK/nm at target",
            newton_to_uk_per_nm(force)
        )));
    }
    Ok(n_r)
}

/// One point of a depth-vs-red-photon-number scan.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RedScanPoint {
    pub n_b: f64,
    pub n_r: f64,
    /// Trap position, m (NaN when no trap).
    pub r_min: f64,
    /// Escape depth, J (0 when no trap).
    pub depth: f64,
    pub trapped: bool,
}

/// Scan the trap depth against the red photon number at fixed blue power,
/// geometric spacing over the axis.
pub fn depth_scan(system: &TrapSystem, axis: &AxisConfig) -> Result<Vec<RedScanPoint>> {
    if !(axis.min > 0.0) || axis.max <= axis.min || axis.steps < 2 {
        return Err(CoreError::Config("red scan axis must be positive and increasing".to_string()));
    }
    let ratio = (axis.max / axis.min).powf(1.0 / (axis.steps - 1) as f64);
    let values: Vec<f64> = (0..axis.steps).map(|i| axis.min * ratio.powi(i as i32)).collect();
    let points: Vec<RedScanPoint> = values
        .par_iter()
        .map(|&n_r| {
            let s = system.with_red_photons(n_r);
            match s.find_trap() {
                Ok(t) if t.exists => RedScanPoint {
                    n_b: system.blue.photon_number,
                    n_r,
                    r_min: t.r_min,
                    depth: t.depth,
                    trapped: true,
                },
                _ => RedScanPoint {
                    n_b: system.blue.photon_number,
                    n_r,
                    r_min: f64::NAN,
                    depth: 0.0,
                    trapped: false,
                },
            }
        })
        .collect();
    Ok(points)
}

/// One cell of the (N_b, r) feasibility grid.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridCell {
    pub n_b: f64,
    /// Requested trap position, m.
    pub r_target: f64,
    /// Achieved trap position, m (NaN when untrapped).
    pub r_min: f64,
    /// Solved red photon number (NaN when unsolvable).
    pub n_r: f64,
    /// Escape depth, J.
    pub depth: f64,
    /// Detection signal-to-noise over τ.
    pub s: f64,
    /// Scattered photons over τ.
    pub m_scattered: f64,
    /// Ground-state loss probability over τ.
    pub p_heating: f64,
    /// Tunneling escape probability over τ.
    pub p_tunnel: f64,
    /// Whether a trap exists at the target.
    pub trapped: bool,
    /// Whether all feasibility thresholds are met.
    pub feasible: bool,
}

impl GridCell {
    fn untrapped(n_b: f64, r_target: f64) -> Self {
        GridCell {
            n_b,
            r_target,
            r_min: f64::NAN,
            n_r: f64::NAN,
            depth: 0.0,
            s: f64::NAN,
            m_scattered: f64::NAN,
            p_heating: f64::NAN,
            p_tunnel: f64::NAN,
            trapped: false,
            feasible: false,
        }
    }
}

/// Full feasibility grid in row-major order (N_b outer, r inner).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepGrid {
    pub n_b_axis: Vec<f64>,
    /// Radial axis, m.
    pub r_axis: Vec<f64>,
    pub cells: Vec<GridCell>,
}

fn linear_axis(axis: &AxisConfig) -> Vec<f64> {
    let n = axis.steps.max(1);
    if n == 1 {
        return vec![axis.min];
    }
    let step = (axis.max - axis.min) / (n - 1) as f64;
    (0..n).map(|i| axis.min + step * i as f64).collect()
}

/// Evaluate one grid cell: solve the red power, verify the trap, and attach
/// the detection/heating/tunneling figures of merit.
pub fn evaluate_cell(
    system: &TrapSystem,
    feas: &FeasibilitySpec,
    n_b: f64,
    r_target: f64,
) -> GridCell {
    let sys_b = system.with_blue_photons(n_b);
    let Ok(n_r) = solve_red_photons(&sys_b, r_target) else {
        return GridCell::untrapped(n_b, r_target);
    };
    let sys = sys_b.with_red_photons(n_r);
    let report = match sys.characterize() {
        Ok(t) if t.exists && (t.r_min - r_target).abs() <= TARGET_TOLERANCE => t,
        _ => return GridCell::untrapped(n_b, r_target),
    };
    let Ok(det) = sys.detection(&report) else {
        return GridCell::untrapped(n_b, r_target);
    };
    let feasible = det.s >= feas.s_min
        && det.p_heating <= feas.heating_max
        && report.tunneling_probability <= feas.tunnel_max;
    GridCell {
        n_b,
        r_target,
        r_min: report.r_min,
        n_r,
        depth: report.depth,
        s: det.s,
        m_scattered: det.m_scattered,
        p_heating: det.p_heating,
        p_tunnel: report.tunneling_probability,
        trapped: true,
        feasible,
    }
}

/// Sweep the (N_b, r) grid in parallel with deterministic cell ordering.
pub fn grid_sweep(
    system: &TrapSystem,
    n_b_axis: &AxisConfig,
    r_axis_nm: &AxisConfig,
    feas: &FeasibilitySpec,
) -> Result<SweepGrid> {
    if n_b_axis.steps == 0 || r_axis_nm.steps == 0 {
        return Err(CoreError::Config("empty sweep axis".to_string()));
    }
    let n_bs = linear_axis(n_b_axis);
    let rs: Vec<f64> = linear_axis(r_axis_nm).iter().map(|&r| r * 1e-9).collect();
    let n_cols = rs.len();
    let cells: Vec<GridCell> = (0..n_bs.len() * n_cols)
        .into_par_iter()
        .map(|idx| {
            let n_b = n_bs[idx / n_cols];
            let r = rs[idx % n_cols];
            evaluate_cell(system, feas, n_b, r)
        })
        .collect();
    Ok(SweepGrid { n_b_axis: n_bs, r_axis: rs, cells })
}

/// Recommended operating point of a feasibility grid.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Recommended {
    pub index: usize,
    pub n_b: f64,
    /// Trap position, m.
    pub r_min: f64,
    pub n_r: f64,
    /// Worst normalized margin across the feasibility thresholds.
    pub margin: f64,
    /// Escape depth, J.
    pub depth: f64,
}

/// Worst normalized margin of a feasible cell against the thresholds;
/// positive means all constraints are met with room to spare.
pub fn cell_margin(cell: &GridCell, feas: &FeasibilitySpec) -> f64 {
    let ms = [
        cell.s / feas.s_min - 1.0,
        1.0 - cell.p_heating / feas.heating_max,
        1.0 - cell.p_tunnel / feas.tunnel_max,
    ];
    ms.into_iter().fold(f64::INFINITY, f64::min)
}

/// Count feasible cells and pick the recommended point: the feasible cell
/// with the largest worst-case margin, ties broken by larger depth, then by
/// lower index.
pub fn feasible_region(grid: &SweepGrid, feas: &FeasibilitySpec) -> (usize, Option<Recommended>) {
    let mut count = 0;
    let mut best: Option<Recommended> = None;
    for (i, cell) in grid.cells.iter().enumerate() {
        if !cell.feasible {
            continue;
        }
        count += 1;
        let margin = cell_margin(cell, feas);
        let candidate = Recommended {
            index: i,
            n_b: cell.n_b,
            r_min: cell.r_min,
            n_r: cell.n_r,
            margin,
            depth: cell.depth,
        };
        let better = match &best {
            None => true,
            Some(b) => {
                margin > b.margin || (margin == b.margin && cell.depth > b.depth)
            }
        };
        if better {
            best = Some(candidate);
        }
    }
    (count, best)
}

/// Outcome of one perturbed re-evaluation in the tolerance audit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TolerancePoint {
    /// Which knob moved: "n_blue" or "n_red".
    pub knob: String,
    /// Applied multiplicative factor, e.g. 0.98 or 1.02.
    pub factor: f64,
    /// Trap displacement relative to the unperturbed position, m.
    pub r_shift: f64,
    pub trapped: bool,
    pub feasible: bool,
}

/// Intensity-tolerance audit of one operating point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToleranceReport {
    pub points: Vec<TolerancePoint>,
    /// Whether the point stays trapped and feasible under every perturbation.
    pub robust: bool,
    /// Largest absolute trap displacement, m.
    pub max_shift: f64,
}

/// Re-evaluate the operating point with each photon number perturbed by
/// ±`feas.tolerance` (the other held fixed).
pub fn tolerance_analysis(system: &TrapSystem, feas: &FeasibilitySpec) -> Result<ToleranceReport> {
    let base = system.characterize()?;
    if !base.exists {
        return Err(CoreError::NoTrap("no trap at the nominal point".to_string()));
    }
    let factors = [1.0 - feas.tolerance, 1.0 + feas.tolerance];
    let mut points = Vec::new();
    for (knob, is_blue) in [("n_blue", true), ("n_red", false)] {
        for factor in factors {
            let sys = if is_blue {
                system.with_blue_photons(system.blue.photon_number * factor)
            } else {
                system.with_red_photons(system.red.photon_number * factor)
            };
            let point = match sys.characterize() {
                Ok(t) if t.exists => {
                    let feasible = match sys.detection(&t) {
                        Ok(det) => {
                            det.s >= feas.s_min
                                && det.p_heating <= feas.heating_max
                                && t.tunneling_probability <= feas.tunnel_max
                        }
                        Err(_) => false,
                    };
                    TolerancePoint {
                        knob: knob.to_string(),
                        factor,
                        r_shift: t.r_min - base.r_min,
                        trapped: true,
                        feasible,
                    }
                }
                _ => TolerancePoint {
                    knob: knob.to_string(),
                    factor,
                    r_shift: f64::NAN,
                    trapped: false,
                    feasible: false,
                },
            };
            points.push(point);
        }
    }
    let robust = points.iter().all(|p| p.trapped && p.feasible);
    let max_shift = points
        .iter()
        .filter(|p| p.trapped)
        .map(|p| p.r_shift.abs())
        .fold(0.0, f64::max);
    Ok(ToleranceReport { points, robust, max_shift })
}

/// Feasibility-grid CSV: one row per cell, 9 significant digits, the trap
/// position in nm; untrapped cells carry NaN numerics and feasible = 0.
pub fn grid_csv(grid: &SweepGrid) -> String {
    let mut out = String::from("N_b,r_min,N_r,depth_mK,S,M,P_heat,P_tunnel,feasible\n");
    for cell in &grid.cells {
        let r_nm = if cell.trapped { m_to_nm(cell.r_min) } else { m_to_nm(cell.r_target) };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            format_sig9(cell.n_b),
            format_sig9(r_nm),
            format_sig9(cell.n_r),
            format_sig9(joule_to_mk(cell.depth)),
            format_sig9(cell.s),
            format_sig9(cell.m_scattered),
            format_sig9(cell.p_heating),
            format_sig9(cell.p_tunnel),
            if cell.feasible { 1 } else { 0 }
        ));
    }
    out
}

/// Red-scan CSV: depth vs red photon number at fixed blue power.
pub fn red_scan_csv(points: &[RedScanPoint]) -> String {
    let mut out = String::from("N_b,N_r,r_min,depth_mK,trapped\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            format_sig9(p.n_b),
            format_sig9(p.n_r),
            format_sig9(m_to_nm(p.r_min)),
            format_sig9(joule_to_mk(p.depth)),
            if p.trapped { 1 } else { 0 }
        ));
    }
    out
}
