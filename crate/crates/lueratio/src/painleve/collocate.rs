//! Two-point boundary value solve by multiple shooting in t = ln x.
//!
//! The interval [x₀, X_far] is cut into segments over which the linearized
//! flow grows by at most about e. The unknowns are the states at the
//! segment starts; the equations are the origin conditions, continuity
//! across segment joins and the tail laws at X_far. Segment maps and their
//! Jacobians come from the variational equations, and the system is solved
//! by damped Newton iteration with a dense LU factorization.

use alloc::vec;
use alloc::vec::Vec;

use super::shoot::{guess_q1sq, guess_s, node_cap, ode_options};
use super::system::{accel, general, reduced, theta_accel, theta_to_state};
use super::{Mode, PainleveState, SolveError, SystemParams, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::BandMatrix;
use crate::ode::{self, Flow, Options};
use crate::scalar::{bessel_with_derivative, SpecialFnKind};

/// Decay margin, in e-folds of the tail modes, between x_switch and X_far.
const FAR_MARGIN: f64 = 25.0;
const MAX_NEWTON: usize = 60;
/// Growth, in e-folds of the fastest mode, allowed across one segment.
const SEGMENT_GROWTH: f64 = 1.0;

/// A boundary value problem for a state of dimension N.
trait Bvp<const N: usize>: Sync {
    fn f(&self, t: f64, y: &[f64; N]) -> Result<[f64; N]>;
    fn left(&self, t0: f64, y: &[f64; N]) -> Vec<f64>;
    fn right(&self, t1: f64, y: &[f64; N]) -> Vec<f64>;
    /// Growth rate of the linearized flow in t.
    fn rate(&self, x: f64) -> f64;
    fn params(&self) -> &SystemParams;
}

fn tail_q1sq(k: f64, x: f64) -> f64 {
    2.0 / libm::sqrt(k * x) + 0.25 * libm::pow(k * x, -1.5)
}

struct General {
    p: SystemParams,
    c: f64,
    d: f64,
    lam: f64,
}

impl General {
    fn new(p: SystemParams, x0: f64) -> Result<Self> {
        let nu = p.nu();
        let c = libm::sqrt(2.0 / nu);
        let d = p.alpha / (4.0 * nu * (p.alpha + 1.0) * (p.alpha + 3.0));
        // q₂ is a multiple of J_ν(√(κx)), κ = r − 2/ν, near the origin.
        let kappa = p.r - 2.0 / nu;
        let z = libm::sqrt(kappa.abs() * x0);
        let (j, jp) = bessel_with_derivative(SpecialFnKind::BesselJ, nu, z)?;
        Ok(Self { p, c, d, lam: z / 2.0 * jp / j })
    }
}

impl Bvp<4> for General {
    fn f(&self, t: f64, y: &[f64; 4]) -> Result<[f64; 4]> {
        let x = libm::exp(t);
        let a = accel(&self.p, x, y[0], y[1], y[2], y[3])?;
        Ok([y[1], a[0], y[3], a[1]])
    }
    fn left(&self, t0: f64, y: &[f64; 4]) -> Vec<f64> {
        let x0 = libm::exp(t0);
        let nu = self.p.nu();
        // Suppresses the x^{−ν} mode of q₁ and the irregular Bessel mode of q₂.
        vec![(y[1] - self.c * self.d * x0) - nu * (y[0] - self.c * (1.0 + self.d * x0)), y[3] - self.lam * y[2]]
    }
    fn right(&self, t1: f64, y: &[f64; 4]) -> Vec<f64> {
        let x = libm::exp(t1);
        let (a, r) = (self.p.alpha, self.p.r);
        let k = r - 1.0;
        let q2sq = 1.0 - a / libm::sqrt(r * x) - 2.0 / libm::sqrt(k * x);
        vec![y[0] * y[0] - tail_q1sq(k, x), y[2] * y[2] - q2sq]
    }
    fn rate(&self, x: f64) -> f64 {
        self.p.nu().max(libm::sqrt(self.p.r * x))
    }
    fn params(&self) -> &SystemParams {
        &self.p
    }
}

struct Reduced {
    p: SystemParams,
}

impl Bvp<2> for Reduced {
    fn f(&self, t: f64, y: &[f64; 2]) -> Result<[f64; 2]> {
        Ok([y[1], theta_accel(&self.p, libm::exp(t), y[0])?])
    }
    fn left(&self, t0: f64, y: &[f64; 2]) -> Vec<f64> {
        let x0 = libm::exp(t0);
        // θ = c x (1 − kx/12 + …) gives Dθ/θ = 1 − kx/12.
        vec![y[1] - y[0] * (1.0 - (self.p.r - 1.0) * x0 / 12.0)]
    }
    fn right(&self, t1: f64, y: &[f64; 2]) -> Vec<f64> {
        let x = libm::exp(t1);
        let c = libm::cos(y[0]);
        vec![c * c - tail_q1sq(self.p.r - 1.0, x)]
    }
    fn rate(&self, x: f64) -> f64 {
        2.0f64.max(libm::sqrt((self.p.r - 1.0) * x))
    }
    fn params(&self) -> &SystemParams {
        &self.p
    }
}

/// Flow map over one segment with its Jacobian, via the variational system.
fn propagate<const N: usize, const V: usize, B: Bvp<N>>(b: &B, t0: f64, t1: f64, y0: &[f64; N], tol: f64) -> Result<([f64; N], [[f64; N]; N])> {
    debug_assert_eq!(V, N + N * N);
    let mut z0 = [0.0; V];
    z0[..N].copy_from_slice(y0);
    for i in 0..N {
        z0[N + i * N + i] = 1.0;
    }
    let mut opts = ode_options(b.params(), tol);
    opts.err_dims = N;
    let var = |t: f64, z: &[f64; V]| -> Result<[f64; V]> {
        let mut y = [0.0; N];
        y.copy_from_slice(&z[..N]);
        let fy = b.f(t, &y)?;
        let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut jac = [[0.0; N]; N];
        for j in 0..N {
            let h = 1e-6 * y[j].abs().max(1e-3 * scale).max(1e-300);
            let mut yp = y;
            let mut ym = y;
            yp[j] += h;
            ym[j] -= h;
            let (fp, fm) = (b.f(t, &yp)?, b.f(t, &ym)?);
            for i in 0..N {
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let mut out = [0.0; V];
        out[..N].copy_from_slice(&fy);
        // Φ′ = J Φ with Φ stored row-major.
        for i in 0..N {
            for c in 0..N {
                let mut s = 0.0;
                for k in 0..N {
                    s += jac[i][k] * z[N + k * N + c];
                }
                out[N + i * N + c] = s;
            }
        }
        Ok(out)
    };
    let (_, z) = ode::integrate(var, t0, z0, t1, &opts, |_, _| f64::INFINITY, |_, _, _| Ok(Flow::Continue))?;
    let mut y = [0.0; N];
    y.copy_from_slice(&z[..N]);
    let mut phi = [[0.0; N]; N];
    for i in 0..N {
        for c in 0..N {
            phi[i][c] = z[N + i * N + c];
        }
    }
    Ok((y, phi))
}

fn propagate_all<const N: usize, const V: usize, B: Bvp<N>>(b: &B, grid: &[f64], ys: &[[f64; N]], tol: f64) -> Result<Vec<([f64; N], [[f64; N]; N])>> {
    let job = |i: usize| propagate::<N, V, B>(b, grid[i], grid[i + 1], &ys[i], tol);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..ys.len()).into_par_iter().map(job).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..ys.len()).map(job).collect()
    }
}

fn residual<const N: usize, B: Bvp<N>>(b: &B, grid: &[f64], ys: &[[f64; N]], ends: &[([f64; N], [[f64; N]; N])]) -> Vec<f64> {
    let m = ys.len();
    let mut f = b.left(grid[0], &ys[0]);
    for i in 0..m - 1 {
        for k in 0..N {
            f.push(ends[i].0[k] - ys[i + 1][k]);
        }
    }
    f.extend(b.right(grid[m], &ends[m - 1].0));
    f
}

fn bc_jacobian<const N: usize>(g: impl Fn(&[f64; N]) -> Vec<f64>, y: &[f64; N]) -> Vec<[f64; N]> {
    let rows = g(y).len();
    let mut out = vec![[0.0; N]; rows];
    for j in 0..N {
        let h = 1e-7 * (1.0 + y[j].abs());
        let mut yp = *y;
        let mut ym = *y;
        yp[j] += h;
        ym[j] -= h;
        let (a, c) = (g(&yp), g(&ym));
        for i in 0..rows {
            out[i][j] = (a[i] - c[i]) / (2.0 * h);
        }
    }
    out
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Damped Newton on the multiple-shooting system; returns the node states.
fn newton<const N: usize, const V: usize, B: Bvp<N>>(b: &B, grid: &[f64], mut ys: Vec<[f64; N]>, tol: f64) -> Result<Vec<[f64; N]>> {
    let m = ys.len();
    let dim = N * m;
    let mut ends = propagate_all::<N, V, B>(b, grid, &ys, tol)?;
    let mut f = residual(b, grid, &ys, &ends);
    for _ in 0..MAX_NEWTON {
        let nl = N / 2;
        let mut jac = BandMatrix::zeros(dim, nl + N - 1, N - 1);
        for (i, row) in bc_jacobian(|y| b.left(grid[0], y), &ys[0]).iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                jac.set(i, c, v);
            }
        }
        for s in 0..m - 1 {
            for k in 0..N {
                let r = nl + s * N + k;
                for c in 0..N {
                    jac.set(r, s * N + c, ends[s].1[k][c]);
                }
                jac.set(r, (s + 1) * N + k, -1.0);
            }
        }
        let last = &ends[m - 1];
        for (i, row) in bc_jacobian(|y| b.right(grid[m], y), &last.0).iter().enumerate() {
            let r = dim - nl + i;
            for c in 0..N {
                let mut v = 0.0;
                for k in 0..N {
                    v += row[k] * last.1[k][c];
                }
                jac.set(r, (m - 1) * N + c, v);
            }
        }
        let lu = jac.factor()?;
        let delta: Vec<f64> = lu.solve(&f).into_iter().map(|v| -v).collect();
        let f0 = norm_inf(&f);
        let mut lam = 1.0;
        let mut accepted = false;
        while lam > 1e-4 {
            let trial: Vec<[f64; N]> = ys
                .iter()
                .enumerate()
                .map(|(i, y)| {
                    let mut n = *y;
                    for k in 0..N {
                        n[k] += lam * delta[i * N + k];
                    }
                    n
                })
                .collect();
            if let Ok(e) = propagate_all::<N, V, B>(b, grid, &trial, tol) {
                let ft = residual(b, grid, &trial, &e);
                let fn_ = norm_inf(&ft);
                if fn_.is_finite() && (fn_ <= (1.0 - 0.25 * lam) * f0 || fn_ <= 1e-3 * tol) {
                    ys = trial;
                    ends = e;
                    f = ft;
                    accepted = true;
                    break;
                }
            }
            lam *= 0.5;
        }
        let step = norm_inf(&delta) * lam;
        if !accepted {
            if f0 <= tol {
                return Ok(ys);
            }
            return Err(Error::NonConvergence { what: "boundary value Newton line search", iterations: MAX_NEWTON });
        }
        if step <= 1e-3 * tol && norm_inf(&f) <= tol {
            return Ok(ys);
        }
        if norm_inf(&f) <= 1e-4 * tol && lam == 1.0 {
            return Ok(ys);
        }
    }
    Err(Error::NonConvergence { what: "boundary value Newton", iterations: MAX_NEWTON })
}

/// Segment start points from ln x₀ to ln X_far, with ln x_switch included.
fn make_grid(rate: impl Fn(f64) -> f64, t0: f64, t_switch: f64, t_far: f64) -> Vec<f64> {
    let mut g = vec![t0];
    let mut t = t0;
    let mut switched = false;
    while t < t_far {
        let dt = (SEGMENT_GROWTH / rate(libm::exp(t))).min(0.5);
        let mut next = t + dt;
        if !switched && next >= t_switch {
            next = t_switch;
            switched = true;
        }
        if next > t_far - 0.2 * dt {
            next = t_far;
        }
        g.push(next);
        t = next;
    }
    g.dedup();
    g
}

fn far_point(p: &SystemParams, x_switch: f64) -> f64 {
    let k = p.r - 1.0;
    let s = libm::sqrt(x_switch) + FAR_MARGIN / (2.0 * libm::sqrt(k));
    s * s
}

/// Replaces end abscissae that differ from x₀ and x_switch only by the
/// rounding of exp(ln x).
pub(super) fn snap_ends(nodes: &mut [PainleveState], x0: f64, x1: f64) {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-13 * b;
    if let Some(n) = nodes.first_mut() {
        if close(n.x, x0) {
            n.x = x0;
        }
    }
    if let Some(n) = nodes.last_mut() {
        if close(n.x, x1) {
            n.x = x1;
        }
    }
}

pub(super) fn collocate(p: &SystemParams, x0: f64, x_switch: f64, tol: f64, shot: Option<&Trajectory>) -> core::result::Result<Trajectory, SolveError> {
    let x_far = far_point(p, x_switch);
    let (t0, ts, tf) = (libm::log(x0), libm::log(x_switch), libm::log(x_far));
    let from_shot = |x: f64| shot.filter(|s| x <= s.x_switch).and_then(|s| s.eval(x.max(s.x0)).ok());
    if p.is_reduced() {
        let b = Reduced { p: *p };
        let grid = make_grid(|x| b.rate(x), t0, ts, tf);
        let guess = |x: f64| -> [f64; 2] {
            if let Some(s) = from_shot(x) {
                return [libm::atan2(s.q2, s.q1), x * (s.q1 * s.dq2 - s.q2 * s.dq1)];
            }
            let th = |x: f64| libm::acos(libm::sqrt(guess_q1sq(p, x)));
            let h = 1e-5;
            [th(x), (th(x * libm::exp(h)) - th(x * libm::exp(-h))) / (2.0 * h)]
        };
        let ys: Vec<[f64; 2]> = grid[..grid.len() - 1].iter().map(|&t| guess(libm::exp(t))).collect();
        let ys = newton::<2, 6, _>(&b, &grid, ys, tol)?;
        let v0 = p.v0() - x0 / 2.0;
        let mut nodes = final_pass::<2, 3>(&grid, &ys, ts, v0, ode_options(p, tol), |t, y| reduced(p, t, y), |x, y| theta_to_state(x, y), |x| node_cap(p, x))?;
        snap_ends(&mut nodes, x0, x_switch);
        Ok(Trajectory::from_nodes(*p, x_switch, tol, Mode::Collocate, nodes)?)
    } else {
        let b = General::new(*p, x0)?;
        let grid = make_grid(|x| b.rate(x), t0, ts, tf);
        let guess = |x: f64| -> [f64; 4] {
            if let Some(s) = from_shot(x) {
                return [s.q1, x * s.dq1, s.q2, x * s.dq2];
            }
            analytic_guess(p, x)
        };
        let ys: Vec<[f64; 4]> = grid[..grid.len() - 1].iter().map(|&t| guess(libm::exp(t))).collect();
        let ys = match newton::<4, 20, _>(&b, &grid, ys, tol) {
            Ok(v) => v,
            Err(_) if shot.is_some() => {
                let ys: Vec<[f64; 4]> = grid[..grid.len() - 1].iter().map(|&t| analytic_guess(p, libm::exp(t))).collect();
                newton::<4, 20, _>(&b, &grid, ys, tol)?
            }
            Err(e) => return Err(e.into()),
        };
        let v0 = p.v0() - x0 / p.nu();
        let to_state = |x: f64, y: &[f64; 5]| PainleveState { x, q1: y[0], dq1: y[1] / x, q2: y[2], dq2: y[3] / x, v: y[4] };
        let mut nodes = final_pass::<4, 5>(&grid, &ys, ts, v0, ode_options(p, tol), |t, y| general(p, t, y), to_state, |x| node_cap(p, x))?;
        snap_ends(&mut nodes, x0, x_switch);
        Ok(Trajectory::from_nodes(*p, x_switch, tol, Mode::Collocate, nodes)?)
    }
}

/// Smooth interpolation between the origin and tail behaviours.
fn analytic_guess(p: &SystemParams, x: f64) -> [f64; 4] {
    let q = |x: f64| -> (f64, f64) {
        let q1sq = guess_q1sq(p, x);
        // S equals its guess wherever that leaves q₂² positive.
        let rest = 1.0 - q1sq - guess_s(p, x);
        (libm::sqrt(q1sq), libm::sqrt(rest.max(1e-8)))
    };
    let h = 1e-5;
    let (a1, a2) = q(x);
    let (u1, u2) = q(x * libm::exp(h));
    let (d1, d2) = q(x * libm::exp(-h));
    [a1, (u1 - d1) / (2.0 * h), a2, (u2 - d2) / (2.0 * h)]
}

/// Integrates the converged segments with v appended and records nodes up
/// to ln x_switch.
#[allow(clippy::too_many_arguments)]
fn final_pass<const N: usize, const F: usize>(
    grid: &[f64],
    ys: &[[f64; N]],
    t_switch: f64,
    v_start: f64,
    opts: Options,
    f: impl Fn(f64, &[f64; F]) -> Result<[f64; F]>,
    to_state: impl Fn(f64, &[f64; F]) -> PainleveState,
    cap: impl Fn(f64) -> f64,
) -> Result<Vec<PainleveState>> {
    let mut nodes = Vec::new();
    let mut v = v_start;
    for (i, y) in ys.iter().enumerate() {
        let (ta, tb) = (grid[i], grid[i + 1]);
        if ta >= t_switch {
            break;
        }
        let mut z = [0.0; F];
        z[..N].copy_from_slice(y);
        z[N] = v;
        if i == 0 {
            nodes.push(to_state(libm::exp(ta), &z));
        }
        let (_, end) = ode::integrate(&f, ta, z, tb, &opts, |t, _| cap(libm::exp(t)), |t, y, _| {
            nodes.push(to_state(libm::exp(t), y));
            Ok(Flow::Continue)
        })?;
        v = end[N];
    }
    Ok(nodes)
}
