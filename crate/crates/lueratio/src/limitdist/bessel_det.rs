//! Integer-α Bessel-determinant representation of the joint law of the two
//! smallest hard-edge eigenvalues, p(s₁, s₂) = e^{−s₂/4}/16 (s₂/s₁)^α D(s₁, s₂).

use alloc::vec;
use alloc::vec::Vec;

use super::ProbabilityValue;
use crate::error::{Error, Result};
use crate::linalg;
use crate::quad;
use crate::scalar::bessel_i_scaled;

/// Largest α accepted by the determinant route.
pub const MAX_BESSEL_ALPHA: u32 = 3;

/// e^{−z} I_m(z) for m = 0..=m_max.
fn scaled_table(z: f64, m_max: usize) -> Result<Vec<f64>> {
    (0..=m_max).map(|m| bessel_i_scaled(m as f64, z)).collect()
}

/// I_{−m} = I_m for integer m.
fn at(table: &[f64], m: i64) -> f64 {
    table[m.unsigned_abs() as usize]
}

/// ln p(s₁, s₂) and the sign of the determinant.
fn log_density(s1: f64, s2: f64, alpha: u32) -> Result<(f64, f64)> {
    if !(s1 > 0.0 && s2 > s1) || !s2.is_finite() {
        return Err(Error::Domain("joint density requires 0 < s1 < s2"));
    }
    let a = alpha as usize;
    let n = a + 2;
    let d = s2 - s1;
    let (z2, zd) = (libm::sqrt(s2), libm::sqrt(d));
    let top = scaled_table(z2, a + 3)?;
    let bottom = scaled_table(zd, a + 3)?;
    let ratio = d / s2;
    let mut m = vec![0.0; n * n];
    for j in 1..=a {
        for k in 1..=n {
            m[(j - 1) * n + k - 1] = at(&top, j as i64 - k as i64 + 2);
        }
    }
    for j in 1..=2usize {
        for k in 1..=n {
            let pw = libm::pow(ratio, (k as f64 - j as f64) / 2.0);
            m[(a + j - 1) * n + k - 1] = pw * at(&bottom, j as i64 - k as i64 + 2);
        }
    }
    let det = linalg::det(&m, n);
    // Undo the e^{−z} scaling: α rows at √s₂ and two rows at √(s₂ − s₁).
    let log_scale = alpha as f64 * z2 + 2.0 * zd;
    let ln = -s2 / 4.0 - libm::log(16.0) + alpha as f64 * libm::log(s2 / s1) + log_scale + libm::log(det.abs());
    Ok((ln, det.signum()))
}

/// p(s₁, s₂) for 0 < s₁ < s₂ and integer α ≥ 0.
pub fn joint_density_bessel(s1: f64, s2: f64, alpha: u32) -> Result<f64> {
    let (ln, sign) = log_density(s1, s2, alpha)?;
    Ok(if sign == 0.0 { 0.0 } else { sign * libm::exp(ln) })
}

/// Upper point beyond which e^{−s₂/4} times the growth of the entries is
/// below `eps`.
fn s2_cutoff(alpha: u32, eps: f64) -> f64 {
    let a = alpha as f64;
    let bound = |s: f64| -s / 4.0 + (a + 2.0) * libm::sqrt(s) + (a + 2.0) * libm::log(s + 1.0) + 10.0;
    let mut s = 16.0;
    while bound(s) > libm::log(eps) {
        s *= 1.1;
    }
    s
}

/// ∫₀^∞ ∫_{rs}^∞ p(s, s₂) ds₂ ds for any r ≥ 1.
fn ratio_mass(r: f64, alpha: u32, tol: f64) -> Result<ProbabilityValue> {
    if alpha > MAX_BESSEL_ALPHA {
        return Err(Error::Domain("Bessel-determinant route supports alpha in 0..=3"));
    }
    if !(tol > 0.0 && tol <= 1e-2) {
        return Err(Error::Domain("tol must lie in (0, 1e-2]"));
    }
    let cut = s2_cutoff(alpha, tol * 1e-4);
    let s_max = cut / r;
    let mut failure = None;
    let mut inner_err = 0.0f64;
    let mut inner = |s: f64| -> f64 {
        let lo = r * s;
        if lo >= cut {
            return 0.0;
        }
        let f = |s2: f64| if s2 > s { joint_density_bessel(s, s2, alpha).unwrap_or(0.0) } else { 0.0 };
        match split_adaptive(f, lo, cut, tol * 1e-3) {
            Ok((v, e)) => {
                inner_err = inner_err.max(e);
                v
            }
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    };
    let (value, err) = split_adaptive(&mut inner, 0.0, s_max, tol * 0.1)?;
    if let Some(e) = failure {
        return Err(e);
    }
    ProbabilityValue::checked(value, err + inner_err * s_max + tol * 1e-3)
}

/// Adaptive integration over [a, b] on panels that double in width from a,
/// matching the exponential decay of the integrands.
fn split_adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64) -> Result<(f64, f64)> {
    let mut edges = vec![a];
    let mut w = 1.0f64.min(b - a);
    while *edges.last().unwrap_or(&b) < b {
        let next = (edges[edges.len() - 1] + w).min(b);
        edges.push(next);
        w *= 2.0;
    }
    let per = abs_tol / edges.len() as f64;
    let (mut v, mut e) = (0.0, 0.0);
    for p in edges.windows(2) {
        let est = quad::adaptive(&mut f, p[0], p[1], per, 1e-12, 400)?;
        v += est.value;
        e += est.abs_err;
    }
    Ok((v, e))
}

/// Q_α(r) from the Bessel-determinant density, integer α ∈ 0..=3.
pub fn q_limit_bessel(r: f64, alpha: u32, tol: f64) -> Result<ProbabilityValue> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::Domain("r must exceed 1"));
    }
    ratio_mass(r, alpha, tol)
}

/// Total mass ∫∫_{0<s₁<s₂} p, which is 1 for a correctly normalized density.
pub fn joint_density_mass(alpha: u32, tol: f64) -> Result<ProbabilityValue> {
    ratio_mass(1.0, alpha, tol)
}
