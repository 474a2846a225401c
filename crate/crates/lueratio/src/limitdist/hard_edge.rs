//! F_α(x) = exp(−¼∫₀ˣ log(x/ξ) q²(ξ) dξ) with q ~ J_α(√ξ) at the origin.
//!
//! In t = ln ξ with p = Dq, the equation for q reads
//! Dp = [α²q/4 − q p² − ξ q (1 − q²)²/4] / (1 − q²). The log-kernel integral
//! A satisfies DA = W with DW = ξ q², so no logarithm is ever integrated.

use alloc::vec::Vec;

use super::ProbabilityValue;
use crate::error::{Error, Result};
use crate::ode::{self, Flow, Options};
use crate::scalar::{bessel_with_derivative, ln_gamma, SpecialFnKind};

/// Starting point ξ₀ for α ≥ 0; see `hard_edge_x0`.
pub const HARD_EDGE_X0: f64 = 1e-8;

fn rhs(alpha: f64, t: f64, y: &[f64; 4]) -> Result<[f64; 4]> {
    let x = libm::exp(t);
    let (q, p) = (y[0], y[1]);
    let u = 1.0 - q * q;
    if !u.is_finite() || u.abs() < 1e-300 {
        return Err(Error::Singular { x, what: "1 - q^2 vanishes" });
    }
    let dp = (alpha * alpha * q / 4.0 - q * p * p - x * q * u * u / 4.0) / u;
    Ok([p, dp, x * q * q, y[2]])
}

/// Start point: ξ₀ = 10⁻⁸, moved towards the origin for α < 0 so that the
/// neglected terms of relative size ξ₀^{α+1} stay below e⁻³².
pub fn hard_edge_x0(alpha: f64) -> f64 {
    if alpha < 0.0 {
        HARD_EDGE_X0.min(libm::exp(-16.0 / (alpha + 1.0)))
    } else {
        HARD_EDGE_X0
    }
}

/// Initial state at ξ₀ and the (q, Dq) size of the first term it neglects.
///
/// With c = 1/(2ᵅΓ(α+1)) the solution is q = J_α(√ξ) + c³ξ^{3α/2+1}/(4(α+1)²)
/// plus terms smaller by ξ^{α+1} and ξ. The correction is applied for α < 0,
/// where ξ^{α+1} decays slowly; for α = 0 it would cancel 1 − q² exactly.
fn start(alpha: f64) -> Result<(f64, [f64; 4], [f64; 2])> {
    let x0 = hard_edge_x0(alpha);
    let too_close = Error::Domain("alpha too close to -1 for a double-precision start");
    if !(x0 > 0.0) {
        return Err(too_close);
    }
    let z = libm::sqrt(x0);
    let (j, jp) = bessel_with_derivative(SpecialFnKind::BesselJ, alpha, z)?;
    let a1 = alpha + 1.0;
    let ln_c = -alpha * core::f64::consts::LN_2 - ln_gamma(a1);
    // Relative size c²ξ^{α+1}/(4(α+1)²) of the first nonlinear term.
    let rel = libm::exp(2.0 * ln_c + a1 * libm::log(x0)) / (4.0 * a1 * a1);
    // q² ~ c² ξ^α near the origin: W = ∫q² = ξq²/(α+1), A = ξq²/(α+1)².
    let w = x0 * j * j / a1;
    // The first neglected term: its value and its exponent m, so Dδ = mδ.
    let (state, neglected) = if alpha < 0.0 {
        let m = 1.5 * alpha + 1.0;
        let d = j * rel;
        let w2 = w * rel;
        ([j + d, z / 2.0 * jp + m * d, w + w2, w / a1 + w2 / (2.0 * a1)], (d * rel, m + a1))
    } else {
        ([j, z / 2.0 * jp, w, w / a1], (j * rel, 1.5 * alpha + 1.0))
    };
    let finite = |v: &[f64; 4]| v.iter().all(|c| c.is_finite());
    if !finite(&state) || !rhs(alpha, libm::log(x0), &state).is_ok_and(|d| finite(&d)) {
        return Err(too_close);
    }
    let d = neglected.0.abs() + 1e-15 * state[0].abs();
    Ok((x0, state, [d, neglected.1 * d]))
}

fn options(tol: f64) -> Options {
    let mut o = Options::new((1e-3 * tol).max(1e-13), 1e-300);
    o.relative = 0b1111;
    o.max_steps = 2_000_000;
    o
}

/// log F at each of the ascending points xs, integrating once through them.
/// With `perturb` set, the first neglected start term is subtracted from
/// (q, Dq), which probes how much the flow amplifies it.
fn log_f_curve(xs: &[f64], alpha: f64, tol: f64, perturb: bool) -> Result<Vec<f64>> {
    let opts = options(tol);
    let (x0, mut y, neglected) = start(alpha)?;
    if perturb {
        y[0] -= neglected[0];
        y[1] -= neglected[1];
    }
    let mut t = libm::log(x0);
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        if x <= x0 {
            // A = ξq²/(α+1)² · (x/ξ₀)^{α+1} to leading order.
            let a0 = y[3];
            out.push(if x <= 0.0 { 0.0 } else { -a0 * libm::pow(x / x0, alpha + 1.0) / 4.0 });
            continue;
        }
        let t1 = libm::log(x);
        if t1 > t {
            let (_, y1) = ode::integrate(|t, y| rhs(alpha, t, y), t, y, t1, &opts, |_, _| 0.25, |_, _, _| Ok(Flow::Continue))?;
            y = y1;
            t = t1;
        }
        out.push(-y[3] / 4.0);
    }
    Ok(out)
}

fn validate(alpha: f64, tol: f64) -> Result<()> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::Domain("alpha must exceed -1"));
    }
    if !(1e-12..=1e-2).contains(&tol) {
        return Err(Error::Domain("tol must lie in [1e-12, 1e-2]"));
    }
    Ok(())
}

/// F_α at ascending points xs ≥ 0. The error estimate adds the change
/// under a tenfold tighter tolerance to the change under a perturbed start;
/// the second grows like e^{2√x} and dominates for large x.
pub fn f_hard_edge_curve(xs: &[f64], alpha: f64, tol: f64) -> Result<Vec<ProbabilityValue>> {
    validate(alpha, tol)?;
    if xs.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(Error::Domain("hard-edge points must be finite and non-negative"));
    }
    if xs.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("hard-edge points must be ascending"));
    }
    let coarse = log_f_curve(xs, alpha, tol, false)?;
    let fine = log_f_curve(xs, alpha, tol / 10.0, false)?;
    let shifted = log_f_curve(xs, alpha, tol / 10.0, true)?;
    fine.iter()
        .zip(&coarse)
        .zip(&shifted)
        .map(|((&f, &c), &p)| {
            let v = libm::exp(f);
            let err = (v - libm::exp(c)).abs() + (v - libm::exp(p)).abs() + f64::EPSILON * v;
            if err > tol {
                return Err(Error::ToleranceNotMet { estimate: err, tol });
            }
            ProbabilityValue::checked(v, err)
        })
        .collect()
}

/// F_α(x) = lim P(4n²λ_min > x).
pub fn f_hard_edge(x: f64, alpha: f64, tol: f64) -> Result<ProbabilityValue> {
    Ok(f_hard_edge_curve(&[x], alpha, tol)?[0])
}
