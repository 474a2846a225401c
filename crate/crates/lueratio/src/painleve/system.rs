//! The system in t = ln x, with p = x q′ = Dq and D = x d/dx.

use super::{PainleveState, SystemParams, SINGULAR_FLOOR};
use crate::error::{Error, Result};

/// Checks the physical branch: q₁ > 0 and S of the sign of α.
fn check(x: f64, q1: f64, s: f64, p: &SystemParams) -> Result<()> {
    if !q1.is_finite() || !s.is_finite() {
        return Err(Error::BranchViolation { x });
    }
    if q1.abs() < SINGULAR_FLOOR {
        return Err(Error::Singular { x, what: "q1 vanishes" });
    }
    if q1 < 0.0 {
        return Err(Error::BranchViolation { x });
    }
    if s.abs() < SINGULAR_FLOOR {
        return Err(Error::Singular { x, what: "S = 1 - q1^2 - q2^2 vanishes" });
    }
    if (s > 0.0) != (p.alpha > 0.0) {
        return Err(Error::BranchViolation { x });
    }
    Ok(())
}

/// Dp for the coupled system, with q = (q₁, q₂) and p = (p₁, p₂).
pub(crate) fn accel(p: &SystemParams, x: f64, q1: f64, p1: f64, q2: f64, p2: f64) -> Result<[f64; 2]> {
    let s = 1.0 - q1 * q1 - q2 * q2;
    check(x, q1, s, p)?;
    let t = q1 * p1 + q2 * p2;
    let pp = p1 * p1 + p2 * p2;
    let a2 = p.alpha * p.alpha / 4.0;
    let s2 = s * s;
    let r1 = a2 * q1 - q1 * s * pp - (x * q1 / 4.0 + 1.0 / (q1 * q1 * q1)) * s2 - q1 * t * t;
    let r2 = a2 * q2 - q2 * s * pp - (p.r * x * q2 / 4.0) * s2 - q2 * t * t;
    let qr = q1 * r1 + q2 * r2;
    Ok([(r1 - q1 * qr) / s2, (r2 - q2 * qr) / s2])
}

/// State (q₁, p₁, q₂, p₂, v) for α ≠ 0.
pub(crate) fn general(p: &SystemParams, t: f64, y: &[f64; 5]) -> Result<[f64; 5]> {
    let x = libm::exp(t);
    let a = accel(p, x, y[0], y[1], y[2], y[3])?;
    Ok([y[1], a[0], y[3], a[1], -x * (y[0] * y[0] + p.r * y[2] * y[2]) / 2.0])
}

/// D²θ for α = 0, where q₁ = cos θ and q₂ = sin θ.
pub(crate) fn theta_accel(p: &SystemParams, x: f64, th: f64) -> Result<f64> {
    let (s, c) = (libm::sin(th), libm::cos(th));
    if !c.is_finite() {
        return Err(Error::BranchViolation { x });
    }
    if c.abs() < SINGULAR_FLOOR {
        return Err(Error::Singular { x, what: "q1 vanishes" });
    }
    if c < 0.0 {
        return Err(Error::BranchViolation { x });
    }
    Ok(-(p.r - 1.0) * x / 4.0 * s * c + s / (c * c * c))
}

/// State (θ, Dθ, v) for α = 0.
pub(crate) fn reduced(p: &SystemParams, t: f64, y: &[f64; 3]) -> Result<[f64; 3]> {
    let x = libm::exp(t);
    let a = theta_accel(p, x, y[0])?;
    let (s, c) = (libm::sin(y[0]), libm::cos(y[0]));
    Ok([y[1], a, -x * (c * c + p.r * s * s) / 2.0])
}

/// Converts a reduced state to the common representation.
pub(crate) fn theta_to_state(x: f64, y: &[f64; 3]) -> PainleveState {
    let (s, c) = (libm::sin(y[0]), libm::cos(y[0]));
    PainleveState { x, q1: c, dq1: -s * y[1] / x, q2: s, dq2: c * y[1] / x, v: y[2] }
}

/// (D²q₁, D²q₂, D²v) at a stored state, used by the Hermite interpolant.
pub(crate) fn second_derivs(p: &SystemParams, st: &PainleveState) -> Result<[f64; 3]> {
    let x = st.x;
    let (p1, p2) = (x * st.dq1, x * st.dq2);
    let (d1, d2) = if p.is_reduced() {
        let th = libm::atan2(st.q2, st.q1);
        let phi = st.q1 * p2 - st.q2 * p1;
        let a = theta_accel(p, x, th)?;
        (-st.q2 * a - st.q1 * phi * phi, st.q1 * a - st.q2 * phi * phi)
    } else {
        let a = accel(p, x, st.q1, p1, st.q2, p2)?;
        (a[0], a[1])
    };
    let dv = -x * (st.q1 * st.q1 + p.r * st.q2 * st.q2) / 2.0;
    let ddv = dv - x * (st.q1 * p1 + p.r * st.q2 * p2);
    Ok([d1, d2, ddv])
}
