//! Integer-order Bessel functions J_n and Y_n for moderate-to-large argument.
//!
//! Needed for the outgoing-wave (Hankel) radial envelope of a whispering
//! gallery mode, |H_l(kρ)|² = J_l(kρ)² + Y_l(kρ)², at orders l ~ 80–170 and
//! arguments kρ ~ 60–150.
//!
//! J_n is computed with Miller's downward recurrence (stable for all n),
//! Y_n by upward recurrence from Y₀, Y₁ (stable: Y is the dominant
//! solution). Y₀, Y₁ use the large-argument Hankel asymptotic expansion,
//! accurate to ~1e-13 for x ≥ 20; the module therefore requires x ≥ 20.

use crate::error::{CoreError, Result};

const MIN_ARG: f64 = 20.0;

/// Asymptotic amplitude/phase series P(ν,x), Q(ν,x) for ν = 0 or 1.
fn pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let z = 8.0 * x;
    // terms of the Hankel asymptotic expansion up to (8x)^-7
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    for k in 1..8 {
        let factor = mu - ((2 * k - 1) as f64).powi(2);
        term *= factor / (k as f64 * z);
        if k % 2 == 1 {
            // odd terms feed Q with alternating sign + + - - ...
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            q += sign * term;
        } else {
            let sign = if (k / 2) % 2 == 1 { -1.0 } else { 1.0 };
            p += sign * term;
        }
    }
    (p, q)
}

fn y01(nu: u32, x: f64) -> f64 {
    let (p, q) = pq(nu as f64, x);
    let chi = x - (0.5 * nu as f64 + 0.25) * std::f64::consts::PI;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.sin() + q * chi.cos())
}

#[cfg(test)]
fn j01(nu: u32, x: f64) -> f64 {
    let (p, q) = pq(nu as f64, x);
    let chi = x - (0.5 * nu as f64 + 0.25) * std::f64::consts::PI;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// J_0 .. J_n by Miller's downward recurrence, normalized with
/// J₀ + 2·Σ_k J_{2k} = 1.
pub fn bessel_j_seq(n: u32, x: f64) -> Result<Vec<f64>> {
    if !(x >= MIN_ARG) {
        return Err(CoreError::OutOfRange(format!(
            "bessel argument {x} below supported minimum {MIN_ARG}"
        )));
    }
    let start = (n as usize).max(x as usize) + 60;
    let mut out = vec![0.0; n as usize + 1];
    let mut jp = 0.0_f64; // J_{m+1}
    let mut j = 1e-30_f64; // J_m (arbitrary scale)
    let mut sum = 0.0_f64;
    for m in (0..=start).rev() {
        let jm = (2.0 * (m as f64 + 1.0) / x) * j - jp;
        jp = j;
        j = jm;
        if m % 2 == 0 {
            sum += if m == 0 { j } else { 2.0 * j };
        }
        if m <= n as usize {
            out[m] = j;
        }
        if j.abs() > 1e250 {
            let scale = 1e-250;
            j *= scale;
            jp *= scale;
            sum *= scale;
            for v in out.iter_mut() {
                *v *= scale;
            }
        }
    }
    for v in out.iter_mut() {
        *v /= sum;
    }
    Ok(out)
}

/// Y_0 .. Y_n by upward recurrence.
pub fn bessel_y_seq(n: u32, x: f64) -> Result<Vec<f64>> {
    if !(x >= MIN_ARG) {
        return Err(CoreError::OutOfRange(format!(
            "bessel argument {x} below supported minimum {MIN_ARG}"
        )));
    }
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut ym = y01(0, x);
    let mut y = y01(1, x);
    out.push(ym);
    if n >= 1 {
        out.push(y);
    }
    for m in 1..n as usize {
        let yn = (2.0 * m as f64 / x) * y - ym;
        ym = y;
        y = yn;
        out.push(y);
    }
    Ok(out)
}

/// |H_n(x)|² = J_n(x)² + Y_n(x)² for the outgoing Hankel function.
pub fn hankel_mod2(n: u32, x: f64) -> Result<f64> {
    let j = bessel_j_seq(n, x)?[n as usize];
    let y = bessel_y_seq(n, x)?[n as usize];
    Ok(j * j + y * y)
}
