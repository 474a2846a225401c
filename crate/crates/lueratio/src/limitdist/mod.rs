//! The limiting quantities: I(s; r), the ratio law Q_α(r), the hard-edge law
//! F_α(x), and the integer-α Bessel-determinant representation of Q_α(r).

mod bessel_det;
mod hard_edge;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::painleve::{self, Mode, SystemParams, Trajectory};
use crate::quad;
use crate::scalar::ln_gamma;

pub use bessel_det::{joint_density_bessel, joint_density_mass, q_limit_bessel};
pub use hard_edge::{f_hard_edge, f_hard_edge_curve, hard_edge_x0, HARD_EDGE_X0};

/// A value of I(s; r) with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IValue {
    pub s: f64,
    pub params: SystemParams,
    pub value: f64,
    pub abs_err_estimate: f64,
}

/// A probability with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbabilityValue {
    pub value: f64,
    pub abs_err_estimate: f64,
}

impl ProbabilityValue {
    /// Clamps a raw estimate into [0, 1] when it is within its error of the
    /// boundary; otherwise the estimate is rejected.
    pub(crate) fn checked(value: f64, abs_err: f64) -> Result<Self> {
        if !value.is_finite() || !abs_err.is_finite() {
            return Err(Error::Overflow("probability is not finite"));
        }
        let clamped = value.clamp(0.0, 1.0);
        if (clamped - value).abs() > abs_err {
            return Err(Error::ToleranceNotMet { estimate: (clamped - value).abs(), tol: abs_err });
        }
        Ok(Self { value: clamped, abs_err_estimate: abs_err })
    }
}

/// ½|C(x_switch) − C(x_switch/2)|: spread of the tail constant of v, which
/// bounds the error of the closed-form tail per unit of log s.
fn tail_spread(traj: &Trajectory) -> f64 {
    let xs = traj.x_switch;
    let c1 = painleve::tail_constant(traj);
    let half = (xs / 2.0).max(traj.x0);
    let c2 = traj.eval(half).map(|st| st.v - painleve::tail_shape(&traj.params, half)).unwrap_or(c1);
    0.5 * (c1 - c2).abs()
}

/// Whether the trajectory stops at the stiffness cutoff, beyond which the
/// closed-form tail of v takes over.
fn reaches_tail(traj: &Trajectory) -> bool {
    traj.x_switch >= painleve::x_tail(&traj.params)
}

/// I(s) = ½∫₀ˢ (v − v(0)) dx/x on a solved trajectory.
pub fn big_i_on(traj: &Trajectory, s: f64) -> Result<IValue> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain("I requires s > 0"));
    }
    let (value, err) = if s <= traj.x_switch {
        (traj.big_i_inside(s)?, traj.big_i_inside_err(s))
    } else if reaches_tail(traj) {
        let inside = traj.big_i_inside(traj.x_switch)?;
        let tail = painleve::tail_i_increment(traj, s);
        let spread = tail_spread(traj) * libm::log(s / traj.x_switch);
        (inside + tail, traj.big_i_inside_err(traj.x_switch) + spread)
    } else {
        return Err(Error::OutOfDomain { x: s, lo: traj.x0, hi: traj.x_switch });
    };
    Ok(IValue { s, params: traj.params, value: value.min(0.0), abs_err_estimate: err + (value.max(0.0)) })
}

/// Solver tolerance used for a requested accuracy on derived quantities.
fn painleve_tol(tol: f64) -> f64 {
    (tol * 1e-3).clamp(1e-11, 1e-8)
}

/// I(s; r) by the v-route: solves the system up to s and integrates.
pub fn big_i(s: f64, params: SystemParams, tol: f64) -> Result<IValue> {
    if !(tol > 0.0) {
        return Err(Error::Domain("tol must be positive"));
    }
    let traj = painleve::solve(params, s.max(1.0), painleve_tol(tol).min(tol), Mode::Collocate)?;
    let v = big_i_on(&traj, s)?;
    let scale = 1.0f64.max(v.value.abs());
    if v.abs_err_estimate > tol * scale {
        return Err(Error::ToleranceNotMet { estimate: v.abs_err_estimate, tol: tol * scale });
    }
    Ok(v)
}

/// I(s) by the q-route −¼∫₀ˢ (q₁² + r q₂²) log(s/x) dx, kept as an
/// independent check of the v-route.
pub fn big_i_q_route(traj: &Trajectory, s: f64) -> Result<f64> {
    if !(s > traj.x0 && s <= traj.x_switch) {
        return Err(Error::OutOfDomain { x: s, lo: traj.x0, hi: traj.x_switch });
    }
    let p = traj.params;
    let x0 = traj.x0;
    let first = traj.nodes[0];
    // Below x₀ the integrand is (q₁² + r q₂²)(x₀) to leading order.
    let c = first.q1 * first.q1 + p.r * first.q2 * first.q2;
    let mut acc = c * x0 * (libm::log(s / x0) + 1.0);
    let rule = quad::gauss_legendre(8);
    let ls = libm::log(s);
    let f = |t: f64| {
        let x = libm::exp(t).clamp(x0, traj.x_switch);
        traj.eval(x).map(|st| (st.q1 * st.q1 + p.r * st.q2 * st.q2) * (ls - t) * x)
    };
    let mut ends: Vec<f64> = traj.nodes.iter().map(|n| libm::log(n.x)).take_while(|&t| t < ls).collect();
    ends.push(ls);
    for w in ends.windows(2) {
        let mut err = None;
        acc += rule.integrate(w[0], w[1], |t| {
            f(t).unwrap_or_else(|e| {
                err = Some(e);
                0.0
            })
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(-acc / 4.0)
}

/// ln of the normalization 1/(4^{α+1} Γ(α+1) Γ(α+2)).
fn log_norm(alpha: f64) -> f64 {
    -((alpha + 1.0) * libm::log(4.0) + ln_gamma(alpha + 1.0) + ln_gamma(alpha + 2.0))
}

/// Leading large-x shape −rx/4 + α√(rx) + 2√((r−1)x) of I.
fn i_shape(p: &SystemParams, x: f64) -> f64 {
    -p.r * x / 4.0 + p.alpha * libm::sqrt(p.r * x) + 2.0 * libm::sqrt((p.r - 1.0) * x)
}

/// Slack exponent of the tail bound beyond the fitted logarithmic remainder.
const TAIL_SLACK: f64 = 10.0;
const GJ_POINTS: usize = 48;
const MAX_TAIL_ATTEMPTS: usize = 8;

/// The ratio law Q_α(r) = ∫₀^∞ x^α e^{I(x; r)} dx / (4^{α+1} Γ(α+1) Γ(α+2)).
pub fn q_limit(r: f64, alpha: f64, tol: f64) -> Result<ProbabilityValue> {
    let params = SystemParams::new(alpha, r)?;
    if !(1e-8..=1e-2).contains(&tol) {
        return Err(Error::Domain("tol must lie in [1e-8, 1e-2]"));
    }
    let ln_norm = log_norm(alpha);
    let target = tol / 10.0;
    // A priori cutoff assuming a remainder no larger than TAIL_SLACK log x.
    let mut x_max = 8.0;
    while (alpha + 1.0 + TAIL_SLACK) * libm::log(x_max) + i_shape(&params, x_max) + ln_norm > libm::log(target * 1e-3) {
        x_max *= 1.25;
    }
    let ptol = painleve_tol(tol);
    for _ in 0..MAX_TAIL_ATTEMPTS {
        let traj = painleve::solve(params, x_max, ptol, Mode::Collocate)?;
        let covered = if reaches_tail(&traj) { f64::INFINITY } else { traj.x_switch };
        let x_hi = x_max.min(covered);
        let bound = tail_bound(&traj, x_hi, ln_norm)?;
        if bound < target {
            return integrate_q(&traj, x_hi, ln_norm, tol, bound);
        }
        x_max *= 2.0;
    }
    Err(Error::TailBound("Q tail bound not met after enlarging the cutoff"))
}

/// Bound on the discarded tail norm·∫_X^∞ x^α e^{I} dx from a fit
/// R(x) ≈ a + b ln x on [X/2, X] plus TAIL_SLACK ln(x/X).
fn tail_bound(traj: &Trajectory, x: f64, ln_norm: f64) -> Result<f64> {
    let p = traj.params;
    let pts: Vec<(f64, f64)> = (0..=8)
        .map(|k| {
            let s = x * (0.5 + k as f64 / 16.0);
            big_i_on(traj, s).map(|v| (libm::log(s), v.value - i_shape(&p, s)))
        })
        .collect::<Result<_>>()?;
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|q| q.0).sum::<f64>() / n, pts.iter().map(|q| q.1).sum::<f64>() / n);
    let sxx: f64 = pts.iter().map(|q| (q.0 - mx) * (q.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|q| (q.0 - mx) * (q.1 - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    // Fit residual enters the constant so the bound dominates every sample.
    let dev = pts.iter().map(|q| (q.1 - a - b * q.0).abs()).fold(0.0, f64::max);
    let lx = libm::log(x);
    let log_g = |s: f64| {
        let ls = libm::log(s);
        ln_norm + p.alpha * ls + i_shape(&p, s) + a + dev + b * ls + TAIL_SLACK * (ls - lx)
    };
    // The bound decays like e^{−rs/4}; integrate until it is negligible.
    let mut hi = 2.0 * x;
    while log_g(hi) > log_g(x) - 60.0 && hi < 1e7 {
        hi *= 1.5;
    }
    let peak = (0..=64).map(|k| log_g(x + (hi - x) * k as f64 / 64.0)).fold(f64::NEG_INFINITY, f64::max);
    let e = quad::adaptive(|s| libm::exp(log_g(s) - peak), x, hi, 1e-6, 1e-6, 4000)?;
    Ok(e.value * libm::exp(peak))
}

fn integrate_q(traj: &Trajectory, x_hi: f64, ln_norm: f64, tol: f64, tail: f64) -> Result<ProbabilityValue> {
    let alpha = traj.params.alpha;
    let norm = libm::exp(ln_norm);
    let mut failure = None;
    let mut e_i = |x: f64| match big_i_on(traj, x) {
        Ok(v) => libm::exp(v.value),
        Err(e) => {
            failure = Some(e);
            0.0
        }
    };
    // ∫₀¹ x^α e^{I} dx by Gauss–Jacobi, with a coarser rule for the error.
    let scale = libm::pow(0.5, alpha);
    let head = quad::gauss_jacobi(GJ_POINTS, 0.0, alpha)?.integrate(0.0, 1.0, &mut e_i) * scale;
    let coarse = quad::gauss_jacobi(GJ_POINTS / 2, 0.0, alpha)?.integrate(0.0, 1.0, &mut e_i) * scale;
    let mut value = head;
    let mut err = (head - coarse).abs();
    // Geometric panels [2^k, 2^{k+1}] beyond 1.
    let mut a = 1.0;
    let panel_tol = tol * 1e-3 / norm;
    while a < x_hi {
        let b = (2.0 * a).min(x_hi);
        let e = quad::adaptive(|x| libm::pow(x, alpha) * e_i(x), a, b, panel_tol, 1e-13, 2000)?;
        value += e.value;
        err += e.abs_err;
        a = b;
    }
    if let Some(e) = failure {
        return Err(e);
    }
    // Propagated error of I itself.
    let i_err = big_i_on(traj, x_hi)?.abs_err_estimate;
    let total = norm * (value + err) * i_err + norm * err + tail;
    ProbabilityValue::checked(norm * value, total.max(f64::EPSILON))
}

#[cfg(test)]
mod tests;
