//! The coupled Painlevé V system for (q₁, q₂), its origin data, and the
//! auxiliary function v with v′ = −(q₁² + r q₂²)/2.
//!
//! Internally the system is integrated in t = ln x with p = x q′, where the
//! origin behaviour q ~ x^{ν/2}, ν = α + 2, is smooth. For α = 0 the
//! constraint q₁² + q₂² = 1 holds identically and the system collapses to a
//! single equation for the angle θ with q₁ = cos θ, q₂ = sin θ.

mod collocate;
mod shoot;
mod system;
mod trajectory;

use crate::error::{Error, Result};
use crate::scalar::{bessel_with_derivative, SpecialFnKind};

pub use trajectory::{Trajectory, TrajectoryDoc, TRAJECTORY_SCHEMA_VERSION};

/// Floor on |S| and |q₁| below which the system is declared singular.
pub const SINGULAR_FLOOR: f64 = 1e-12;

/// The parameters (α, r) of every distributional object.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SystemParams {
    pub alpha: f64,
    pub r: f64,
}

impl SystemParams {
    pub fn new(alpha: f64, r: f64) -> Result<Self> {
        if !(alpha > -1.0) || !alpha.is_finite() {
            return Err(Error::Domain("alpha must exceed -1"));
        }
        if !(r > 1.0) || !r.is_finite() {
            return Err(Error::Domain("r must exceed 1"));
        }
        Ok(Self { alpha, r })
    }

    /// ν = α + 2.
    pub fn nu(&self) -> f64 {
        self.alpha + 2.0
    }

    /// v(0) = (4ν² − 1)/8.
    pub fn v0(&self) -> f64 {
        let nu = self.nu();
        (4.0 * nu * nu - 1.0) / 8.0
    }

    pub(crate) fn is_reduced(&self) -> bool {
        self.alpha == 0.0
    }
}

/// A point of a trajectory: x, q₁, q₁′, q₂, q₂′ and v (primes are d/dx).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PainleveState {
    pub x: f64,
    pub q1: f64,
    pub dq1: f64,
    pub q2: f64,
    pub dq2: f64,
    pub v: f64,
}

impl PainleveState {
    /// S = 1 − q₁² − q₂².
    pub fn s(&self) -> f64 {
        1.0 - self.q1 * self.q1 - self.q2 * self.q2
    }
}

/// First-order-system derivative (q₁′, q₁″, q₂′, q₂″, v′).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub dq1: f64,
    pub ddq1: f64,
    pub dq2: f64,
    pub ddq2: f64,
    pub dv: f64,
}

/// Solver strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "lowercase"))]
pub enum Mode {
    /// Initial-value integration from the origin data.
    Shoot,
    /// Two-point boundary value solve with origin and tail data.
    Collocate,
}

/// Coefficient matrix M of (q₁″, q₂″) in the two equations:
/// M = x²S [[q₁²+S, q₁q₂], [q₁q₂, q₂²+S]], with det M = x⁴S³.
pub fn coefficient_matrix(x: f64, st: &PainleveState) -> [[f64; 2]; 2] {
    let s = st.s();
    let f = x * x * s;
    [[f * (st.q1 * st.q1 + s), f * st.q1 * st.q2], [f * st.q1 * st.q2, f * (st.q2 * st.q2 + s)]]
}

/// The parts of each equation that do not involve q″ (left side minus α²q/4).
fn free_terms(x: f64, st: &PainleveState, p: &SystemParams) -> ([f64; 2], [f64; 2]) {
    let (q1, q2, d1, d2) = (st.q1, st.q2, st.dq1, st.dq2);
    let s = st.s();
    let t = q1 * d1 + q2 * d2;
    // Σ (x q_k q_k′)′ without the q_k″ part.
    let sum_lower = t + x * (d1 * d1 + d2 * d2);
    let a2 = p.alpha * p.alpha;
    let e1 = [
        x * q1 * s * sum_lower,
        x * (d1 + q1 / 4.0) * s * s,
        s * s / (q1 * q1 * q1),
        x * x * q1 * t * t,
        -a2 * q1 / 4.0,
    ];
    let e2 = [x * q2 * s * sum_lower, x * (d2 + p.r * q2 / 4.0) * s * s, 0.0, x * x * q2 * t * t, -a2 * q2 / 4.0];
    let sum = |e: &[f64; 5]| e.iter().sum::<f64>();
    let mag = |e: &[f64; 5]| e.iter().map(|v| v.abs()).sum::<f64>();
    ([sum(&e1), sum(&e2)], [mag(&e1), mag(&e2)])
}

/// Residuals of both equations for given second derivatives, with the sum
/// of absolute values of each equation's terms as a scale.
pub fn equation_residuals(x: f64, st: &PainleveState, ddq1: f64, ddq2: f64, p: &SystemParams) -> ([f64; 2], [f64; 2]) {
    let m = coefficient_matrix(x, st);
    let (f, mag) = free_terms(x, st, p);
    let lhs = [m[0][0] * ddq1 + m[0][1] * ddq2, m[1][0] * ddq1 + m[1][1] * ddq2];
    ([lhs[0] + f[0], lhs[1] + f[1]], [mag[0] + lhs[0].abs(), mag[1] + lhs[1].abs()])
}

/// Right-hand side of the first-order system at x.
pub fn rhs(x: f64, st: &PainleveState, p: &SystemParams) -> Result<Derivative> {
    rhs_with_floor(x, st, p, SINGULAR_FLOOR)
}

/// As [`rhs`] with an explicit singularity floor on |S| and |q₁|.
pub fn rhs_with_floor(x: f64, st: &PainleveState, p: &SystemParams, floor: f64) -> Result<Derivative> {
    if !(x > 0.0) {
        return Err(Error::Domain("rhs requires x > 0"));
    }
    let s = st.s();
    if s.abs() < floor {
        return Err(Error::Singular { x, what: "S = 1 - q1^2 - q2^2 vanishes" });
    }
    if st.q1.abs() < floor {
        return Err(Error::Singular { x, what: "q1 vanishes" });
    }
    let m = coefficient_matrix(x, st);
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let expect = x * x * x * x * s * s * s;
    if !((det - expect).abs() <= 1e-10 * expect.abs()) {
        return Err(Error::Singular { x, what: "coefficient determinant mismatch" });
    }
    let (f, _) = free_terms(x, st, p);
    // M⁻¹ = (I − q qᵀ)/(x² S²) because q₁² + q₂² + S = 1.
    let (b1, b2) = (-f[0], -f[1]);
    let qb = st.q1 * b1 + st.q2 * b2;
    let den = x * x * s * s;
    Ok(Derivative {
        dq1: st.dq1,
        ddq1: (b1 - st.q1 * qb) / den,
        dq2: st.dq2,
        ddq2: (b2 - st.q2 * qb) / den,
        dv: -(st.q1 * st.q1 + p.r * st.q2 * st.q2) / 2.0,
    })
}

/// Default left endpoint x₀ = 10⁻⁸ / max(1, r).
pub fn default_x0(p: &SystemParams) -> f64 {
    1e-8 / p.r.max(1.0)
}

/// Leading-order origin data at x₀: q₁ = √(2/ν), q₁′ = 0,
/// q₂ = (1 − r⁻¹) J_ν(√(r x₀)), v = v(0) − x₀/ν.
pub fn origin_state(x0: f64, p: &SystemParams) -> Result<PainleveState> {
    if !(x0 > 0.0) || p.r * x0 > 1e-4 {
        return Err(Error::Domain("origin data requires 0 < r x0 <= 1e-4"));
    }
    let nu = p.nu();
    let z = libm::sqrt(p.r * x0);
    let (j, jp) = bessel_with_derivative(SpecialFnKind::BesselJ, nu, z)?;
    let amp = 1.0 - 1.0 / p.r;
    Ok(PainleveState {
        x: x0,
        q1: libm::sqrt(2.0 / nu),
        dq1: 0.0,
        q2: amp * j,
        // d/dx J_ν(√(rx)) = J_ν′(z) r / (2z).
        dq2: amp * jp * p.r / (2.0 * z),
        v: p.v0() - x0 / nu,
    })
}

/// Stiffness cutoff: the smallest x with predicted S below 0.02, capped at
/// 10⁴. For α = 0 the reduced equation is not stiff and the cap applies.
pub fn x_tail(p: &SystemParams) -> f64 {
    if p.alpha == 0.0 {
        return 1e4;
    }
    let x = (p.alpha.abs() / 0.02) * (p.alpha.abs() / 0.02) / p.r;
    x.min(1e4)
}

/// Failure of a solve, with the valid trajectory prefix when one exists.
#[derive(Debug, Clone)]
pub struct SolveError {
    pub error: Error,
    pub prefix: Option<alloc::boxed::Box<Trajectory>>,
}

impl From<Error> for SolveError {
    fn from(error: Error) -> Self {
        Self { error, prefix: None }
    }
}

impl From<SolveError> for Error {
    fn from(e: SolveError) -> Self {
        e.error
    }
}

impl core::fmt::Display for SolveError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match &self.prefix {
            Some(t) => write!(f, "{} (valid prefix up to x = {})", self.error, t.x_switch),
            None => write!(f, "{}", self.error),
        }
    }
}

/// Solves the system on [x₀, min(x_max, X_tail)] with the default x₀.
pub fn solve(params: SystemParams, x_max: f64, tol: f64, mode: Mode) -> core::result::Result<Trajectory, SolveError> {
    solve_from(params, default_x0(&params), x_max, tol, mode)
}

/// Solves with an explicit left endpoint x₀.
pub fn solve_from(params: SystemParams, x0: f64, x_max: f64, tol: f64, mode: Mode) -> core::result::Result<Trajectory, SolveError> {
    let params = SystemParams::new(params.alpha, params.r)?;
    if !(x_max > x0) {
        return Err(Error::Domain("x_max must exceed x0").into());
    }
    if !(1e-12..=1e-4).contains(&tol) {
        return Err(Error::Domain("tol must lie in [1e-12, 1e-4]").into());
    }
    let x_switch = x_max.min(x_tail(&params));
    let shot = shoot::shoot(&params, x0, x_switch, tol);
    match mode {
        Mode::Shoot => shot,
        Mode::Collocate => {
            let guess = shot.as_ref().ok().or_else(|| shot.as_ref().err().and_then(|e| e.prefix.as_deref()));
            collocate::collocate(&params, x0, x_switch, tol, guess)
        }
    }
}

/// Tail-law residuals e₁ = q₁²√((r−1)x) − 2 and
/// e₂ = q₂² − 1 + α/√(rx) + 2/√((r−1)x) at each probe.
pub fn tail_residuals(traj: &Trajectory, probes: &[f64]) -> Result<alloc::vec::Vec<(f64, f64, f64)>> {
    let p = traj.params;
    probes
        .iter()
        .map(|&x| {
            let st = traj.eval(x)?;
            let k = p.r - 1.0;
            let e1 = st.q1 * st.q1 * libm::sqrt(k * x) - 2.0;
            let e2 = st.q2 * st.q2 - 1.0 + p.alpha / libm::sqrt(p.r * x) + 2.0 / libm::sqrt(k * x);
            Ok((x, e1, e2))
        })
        .collect()
}

/// v(x): accumulated along the trajectory up to x_switch, and
/// −rx/2 + (α + 2√(1−r⁻¹))√(rx) + C beyond, with C fixed by continuity.
pub fn v_of_x(traj: &Trajectory, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain("v requires x > 0"));
    }
    if x < traj.x0 {
        // v = v(0) + v′(0⁺) x to O(x²).
        let p = traj.params;
        let first = &traj.nodes[0];
        return Ok(p.v0() + (first.v - p.v0()) * x / traj.x0);
    }
    if x <= traj.x_switch {
        return Ok(traj.eval(x)?.v);
    }
    Ok(tail_v(traj, x))
}

pub(crate) fn tail_shape(p: &SystemParams, x: f64) -> f64 {
    let b = p.alpha + 2.0 * libm::sqrt(1.0 - 1.0 / p.r);
    -p.r * x / 2.0 + b * libm::sqrt(p.r * x)
}

pub(crate) fn tail_constant(traj: &Trajectory) -> f64 {
    let last = traj.nodes.last().expect("trajectory has nodes");
    last.v - tail_shape(&traj.params, last.x)
}

fn tail_v(traj: &Trajectory, x: f64) -> f64 {
    tail_shape(&traj.params, x) + tail_constant(traj)
}

/// ½∫_{x_switch}^{s} (v − v(0)) dx/x with the closed-form tail of v.
pub(crate) fn tail_i_increment(traj: &Trajectory, s: f64) -> f64 {
    let p = traj.params;
    let xs = traj.x_switch;
    let b = p.alpha + 2.0 * libm::sqrt(1.0 - 1.0 / p.r);
    let c = tail_constant(traj) - p.v0();
    0.5 * (-p.r * (s - xs) / 2.0 + 2.0 * b * (libm::sqrt(p.r * s) - libm::sqrt(p.r * xs)) + c * libm::log(s / xs))
}

#[cfg(test)]
mod tests;
