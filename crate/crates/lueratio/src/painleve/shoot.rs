//! Initial-value integration from the origin data.
//!
//! For α = 0 the reduced angle equation is integrated directly. For α ≠ 0
//! the q₁ equation has a free growing mode ∝ x^ν at the origin, so q₁′(x₀)
//! is tuned by bisection on the direction in which the trajectory leaves
//! its expected course. In both cases a twin
//! trajectory measures how far the result can be trusted.

use alloc::boxed::Box;
use alloc::vec::Vec;

use super::system::{general, reduced, theta_to_state};
use super::{origin_state, Mode, PainleveState, SolveError, SystemParams, Trajectory};
use crate::error::Error;
use crate::ode::{self, Flow, Options};

/// Largest step in t, relative to the local variation rate, between nodes.
pub(super) const NODE_STEP: f64 = 0.05;

pub(super) fn node_cap(p: &SystemParams, _x: f64) -> f64 {
    NODE_STEP / (p.nu() / 2.0).max(1.0)
}

/// Integration options for a requested solution tolerance. The components
/// that start at O(x₀^{ν/2}) and keep their sign (θ, Dθ, or q₂, Dq₂) are
/// controlled purely relatively; Dq₁ changes sign and keeps the floor.
pub(super) fn ode_options(p: &SystemParams, tol: f64) -> Options {
    let mut o = Options::new(tol * 0.1, tol * 1e-3);
    o.relative = if p.is_reduced() { 0b11 } else { 0b1100 };
    o.max_steps = 2_000_000;
    o
}

/// Shooting amplifies local errors along the growing modes, so the
/// initial-value runs use a tighter relative tolerance.
fn shoot_options(p: &SystemParams, tol: f64) -> Options {
    let mut o = ode_options(p, tol);
    o.rtol = (tol * 1e-3).max(SHOOT_RTOL_FLOOR);
    o
}

const SHOOT_RTOL_FLOOR: f64 = 2e-14;

pub(super) fn shoot(p: &SystemParams, x0: f64, x_end: f64, tol: f64) -> core::result::Result<Trajectory, SolveError> {
    if p.is_reduced() {
        shoot_reduced(p, x0, x_end, tol)
    } else {
        shoot_general(p, x0, x_end, tol)
    }
}

fn reduced_run(p: &SystemParams, x0: f64, x_end: f64, opts: &Options, th0: f64, phi0: f64, v: f64) -> (Vec<PainleveState>, Option<Error>) {
    let mut nodes = Vec::new();
    let res = ode::integrate(
        |t, y: &[f64; 3]| reduced(p, t, y),
        libm::log(x0),
        [th0, phi0, v],
        libm::log(x_end),
        opts,
        |t, _| node_cap(p, libm::exp(t)),
        |t, y, _| {
            nodes.push(theta_to_state(libm::exp(t), y));
            Ok(Flow::Continue)
        },
    );
    (nodes, res.err())
}

fn shoot_reduced(p: &SystemParams, x0: f64, x_end: f64, tol: f64) -> core::result::Result<Trajectory, SolveError> {
    let o = origin_state(x0, p)?;
    let th0 = libm::atan2(o.q2, o.q1);
    let phi0 = x0 * o.dq2 / o.q1;
    let opts = shoot_options(p, tol);
    let (mut nodes, err) = reduced_run(p, x0, x_end, &opts, th0, phi0, o.v);
    nodes.insert(0, o);
    // The twin is perturbed and integrated more tightly, so the gap bounds
    // both the conditioning and the amplified integration error.
    let mut fine = opts;
    fine.rtol = (opts.rtol * 0.1).max(0.25 * SHOOT_RTOL_FLOOR);
    let twin_scale = 1.0 + TWIN_DELTA;
    let (mut twin, _) = reduced_run(p, x0, x_end, &fine, th0 * twin_scale, phi0 * twin_scale, o.v);
    twin.insert(0, o);
    finish(p, tol, nodes, &twin, err, x_end)
}

/// Bracket widenings tried before giving up.
const BRACKET_DOUBLINGS: usize = 30;

/// Relative perturbation of the twin trajectory.
const TWIN_DELTA: f64 = 1e-13;

/// Truncates `nodes` where the twin departs by more than 10·tol and builds
/// the trajectory, or an error carrying the reliable prefix.
fn finish(
    p: &SystemParams,
    tol: f64,
    mut nodes: Vec<PainleveState>,
    twin: &[PainleveState],
    err: Option<Error>,
    x_end: f64,
) -> core::result::Result<Trajectory, SolveError> {
    dedup(&mut nodes);
    let mut keep = nodes.len();
    if let Ok(tw) = Trajectory::from_nodes(*p, twin.last().map_or(0.0, |n| n.x), tol, Mode::Shoot, dedup_vec(twin)) {
        let hi = tw.nodes.last().map_or(0.0, |n| n.x);
        for (i, n) in nodes.iter().enumerate() {
            let gap = if n.x > hi {
                f64::INFINITY
            } else {
                match tw.eval(n.x) {
                    Ok(s) => (s.q1 - n.q1).abs() + (s.q2 - n.q2).abs(),
                    Err(_) => f64::INFINITY,
                }
            };
            if gap > 10.0 * tol {
                keep = i;
                break;
            }
        }
    } else {
        keep = keep.min(1);
    }
    let reached = keep == nodes.len() && err.is_none() && nodes.last().is_some_and(|n| n.x >= x_end * (1.0 - 1e-12));
    nodes.truncate(keep.max(2).min(nodes.len()));
    let x0 = nodes.first().map_or(0.0, |n| n.x);
    super::collocate::snap_ends(&mut nodes, x0, x_end);
    let x_last = nodes.last().map_or(0.0, |n| n.x);
    let traj = Trajectory::from_nodes(*p, x_last, tol, Mode::Shoot, nodes);
    match (reached, traj) {
        (true, Ok(t)) => Ok(t),
        (false, Ok(t)) => {
            let error = match err {
                Some(e @ Error::StepUnderflow { .. }) => e,
                Some(Error::Singular { x, .. } | Error::BranchViolation { x }) if x <= x_last * (1.0 + 1e-9) => Error::BranchViolation { x },
                _ => Error::LostAccuracy { x: x_last },
            };
            Err(SolveError { error, prefix: Some(Box::new(t)) })
        }
        (_, Err(e)) => Err(SolveError { error: err.unwrap_or(e), prefix: None }),
    }
}

fn dedup(nodes: &mut Vec<PainleveState>) {
    nodes.dedup_by(|b, a| !(b.x > a.x));
}

fn dedup_vec(nodes: &[PainleveState]) -> Vec<PainleveState> {
    let mut v = nodes.to_vec();
    dedup(&mut v);
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    /// q₁ fell below its expected course: q₁′(x₀) too small.
    Low,
    /// q₁ rose above its expected course: q₁′(x₀) too large.
    High,
    Reached,
}

/// Departure thresholds on the ratios to the guessed course.
const DEPART_LO: f64 = 0.2;
const DEPART_HI: f64 = 5.0;

/// Tail-consistent guesses of q₁² and S used to recognize a departure.
pub(super) fn guess_q1sq(p: &SystemParams, x: f64) -> f64 {
    let c2 = 2.0 / p.nu();
    c2 / (1.0 + c2 * libm::sqrt((p.r - 1.0) * x) / 2.0)
}

pub(super) fn guess_s(p: &SystemParams, x: f64) -> f64 {
    p.alpha / (p.nu() + libm::sqrt(p.r * x))
}

/// Departure direction from the ratios (q₁²/guess, S/guess). A shrinking S
/// means q₁ too large for α > 0 and too small for α < 0.
fn classify(alpha: f64, (a, b): (f64, f64)) -> Option<Outcome> {
    let s_shrinks = b < DEPART_LO;
    let s_grows = b > DEPART_HI;
    if a < DEPART_LO || (alpha > 0.0 && s_grows) || (alpha < 0.0 && s_shrinks) {
        return Some(Outcome::Low);
    }
    if a > DEPART_HI || (alpha > 0.0 && s_shrinks) || (alpha < 0.0 && s_grows) {
        return Some(Outcome::High);
    }
    None
}

fn general_run(p: &SystemParams, o: &PainleveState, dq1: f64, x_end: f64, tol: f64) -> (Outcome, Vec<PainleveState>, Option<Error>) {
    let x0 = o.x;
    let mut nodes = Vec::new();
    let mut outcome = Outcome::Reached;
    let mut opts = shoot_options(p, tol);
    opts.max_steps = 200_000;
    let ratio = |x: f64, q1: f64, q2: f64| {
        let s = 1.0 - q1 * q1 - q2 * q2;
        (q1 * q1 / guess_q1sq(p, x), s / guess_s(p, x))
    };
    let res = ode::integrate(
        |t, y: &[f64; 5]| general(p, t, y),
        libm::log(x0),
        [o.q1, x0 * dq1, o.q2, x0 * o.dq2, o.v],
        libm::log(x_end),
        &opts,
        |t, _| node_cap(p, libm::exp(t)),
        |t, y, _| {
            let x = libm::exp(t);
            nodes.push(PainleveState { x, q1: y[0], dq1: y[1] / x, q2: y[2], dq2: y[3] / x, v: y[4] });
            match classify(p.alpha, ratio(x, y[0], y[2])) {
                Some(o) => {
                    outcome = o;
                    Ok(Flow::Stop)
                }
                None => Ok(Flow::Continue),
            }
        },
    );
    let err = res.err();
    if err.is_some() {
        // An abrupt failure is classified by the direction of the drift.
        outcome = match nodes.last() {
            Some(n) => {
                let (a, b) = ratio(n.x, n.q1, n.q2);
                let s_high = if p.alpha > 0.0 { b < 1.0 } else { b > 1.0 };
                if a > 1.0 || (a >= 0.999 && s_high) {
                    Outcome::High
                } else {
                    Outcome::Low
                }
            }
            None => Outcome::High,
        };
    }
    (outcome, nodes, err)
}

fn shoot_general(p: &SystemParams, x0: f64, x_end: f64, tol: f64) -> core::result::Result<Trajectory, SolveError> {
    let o = origin_state(x0, p)?;
    let nu = p.nu();
    let c = libm::sqrt(2.0 / nu);
    let d = p.alpha / (4.0 * nu * (p.alpha + 1.0) * (p.alpha + 3.0));
    let centre = c * d;
    let run = |dq1: f64| general_run(p, &o, dq1, x_end, tol);
    let first = run(o.dq1);
    if first.0 == Outcome::Reached {
        let mut nodes = first.1;
        nodes.insert(0, o);
        let twin = run(o.dq1 * (1.0 + TWIN_DELTA) + TWIN_DELTA * centre.abs()).1;
        return finish(p, tol, nodes, &twin, first.2, x_end);
    }
    // Bracket with different departures at the two ends.
    let mut w = centre.abs().max(1e-12);
    let (mut lo, mut hi) = (centre - w, centre + w);
    let mut ends = None;
    for _ in 0..BRACKET_DOUBLINGS {
        let (a, b) = (run(lo).0, run(hi).0);
        if a != b {
            ends = Some(a);
            break;
        }
        w *= 2.0;
        lo = centre - w;
        hi = centre + w;
    }
    let Some(lo_out) = ends else {
        return Err(Error::NonConvergence { what: "shooting bracket", iterations: BRACKET_DOUBLINGS }.into());
    };
    let mut best = None;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        let out = run(mid);
        if out.0 == Outcome::Reached {
            best = Some((mid, out));
            break;
        }
        if out.0 == lo_out {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (dq1, out) = match best {
        Some(b) => b,
        None => (lo, run(lo)),
    };
    let twin_val = if dq1 == lo { hi } else { lo };
    let twin_val = if twin_val == dq1 { dq1 * (1.0 + TWIN_DELTA) } else { twin_val };
    let mut nodes = out.1;
    let mut o1 = o;
    o1.dq1 = dq1;
    nodes.insert(0, o1);
    let mut twin = run(twin_val).1;
    twin.insert(0, PainleveState { dq1: twin_val, ..o });
    let err = if out.0 == Outcome::Reached { out.2 } else { Some(out.2.unwrap_or(Error::BranchViolation { x: nodes.last().map_or(x0, |n| n.x) })) };
    finish(p, tol, nodes, &twin, err, x_end)
}
