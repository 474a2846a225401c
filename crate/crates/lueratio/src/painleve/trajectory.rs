//! Solved trajectories with quintic Hermite dense output in t = ln x.

use alloc::vec::Vec;

use super::system::second_derivs;
use super::{Mode, PainleveState, SystemParams};
use crate::error::{Error, Result};

/// Version of the serialized trajectory document.
pub const TRAJECTORY_SCHEMA_VERSION: u32 = 1;

/// Serialized form of a trajectory; the interpolant is rebuilt from nodes.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrajectoryDoc {
    pub schema_version: u32,
    pub params: SystemParams,
    pub x0: f64,
    pub x_switch: f64,
    pub tol: f64,
    pub mode: Mode,
    pub nodes: Vec<PainleveState>,
}

/// A solution of the system on [x0, x_switch].
///
/// Each component is interpolated by a quintic in t matching the value and
/// first two t-derivatives at both ends of every node interval; the second
/// derivatives come from the equations themselves, so the interpolant is a
/// function of the nodes alone.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "TrajectoryDoc", into = "TrajectoryDoc"))]
pub struct Trajectory {
    pub params: SystemParams,
    pub x0: f64,
    pub x_switch: f64,
    pub tol: f64,
    pub mode: Mode,
    pub nodes: Vec<PainleveState>,
    ts: Vec<f64>,
    d2: Vec<[f64; 3]>,
    /// ½∫₀^{x_i} (v − v(0)) dx/x at each node.
    cum_i: Vec<f64>,
    /// Accumulated |quintic − cubic| difference of the same integral.
    cum_err: Vec<f64>,
}

fn quintic(f0: f64, d0: f64, dd0: f64, f1: f64, d1: f64, dd1: f64, h: f64) -> [f64; 6] {
    let c0 = f0;
    let c1 = h * d0;
    let c2 = h * h * dd0 / 2.0;
    let a = f1 - (c0 + c1 + c2);
    let b = h * d1 - (c1 + 2.0 * c2);
    let c = h * h * dd1 - 2.0 * c2;
    [c0, c1, c2, 10.0 * a - 4.0 * b + c / 2.0, -15.0 * a + 7.0 * b - c, 6.0 * a - 3.0 * b + c / 2.0]
}

/// Value and first two s-derivatives of a polynomial in s.
fn poly(c: &[f64; 6], s: f64) -> (f64, f64, f64) {
    let mut v = 0.0;
    let mut d = 0.0;
    let mut dd = 0.0;
    for k in (0..6).rev() {
        dd = dd * s + 2.0 * d;
        d = d * s + v;
        v = v * s + c[k];
    }
    (v, d, dd)
}

const GL4: [(f64, f64); 4] = [
    (-0.861_136_311_594_052_6, 0.347_854_845_137_453_85),
    (-0.339_981_043_584_856_26, 0.652_145_154_862_546_2),
    (0.339_981_043_584_856_26, 0.652_145_154_862_546_2),
    (0.861_136_311_594_052_6, 0.347_854_845_137_453_85),
];

impl Trajectory {
    /// Builds a trajectory from ordered nodes, reconstructing the interpolant.
    pub fn from_nodes(params: SystemParams, x_switch: f64, tol: f64, mode: Mode, nodes: Vec<PainleveState>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Domain("trajectory needs at least two nodes"));
        }
        if nodes.windows(2).any(|w| !(w[1].x > w[0].x)) {
            return Err(Error::Domain("trajectory nodes must increase strictly in x"));
        }
        let x0 = nodes[0].x;
        let ts: Vec<f64> = nodes.iter().map(|n| libm::log(n.x)).collect();
        let d2 = nodes.iter().map(|n| second_derivs(&params, n)).collect::<Result<Vec<_>>>()?;
        let mut t = Self { params, x0, x_switch, tol, mode, nodes, ts, d2, cum_i: Vec::new(), cum_err: Vec::new() };
        let v0 = params.v0();
        let n = t.nodes.len();
        let (mut cum, mut cum_err) = (Vec::with_capacity(n), Vec::with_capacity(n));
        let mut acc = 0.5 * (t.nodes[0].v - v0);
        let mut err = 0.0;
        cum.push(acc);
        cum_err.push(err);
        for i in 0..n - 1 {
            let piece = t.half_integral(i, t.ts[i + 1]);
            acc += piece;
            err += (piece - t.half_integral_cubic(i)).abs();
            cum.push(acc);
            cum_err.push(err);
        }
        t.cum_i = cum;
        t.cum_err = cum_err;
        Ok(t)
    }

    pub fn to_doc(&self) -> TrajectoryDoc {
        TrajectoryDoc {
            schema_version: TRAJECTORY_SCHEMA_VERSION,
            params: self.params,
            x0: self.x0,
            x_switch: self.x_switch,
            tol: self.tol,
            mode: self.mode,
            nodes: self.nodes.clone(),
        }
    }

    pub fn from_doc(doc: TrajectoryDoc) -> Result<Self> {
        if doc.schema_version != TRAJECTORY_SCHEMA_VERSION {
            return Err(Error::Domain("unsupported trajectory schema version"));
        }
        let t = Self::from_nodes(doc.params, doc.x_switch, doc.tol, doc.mode, doc.nodes)?;
        if t.x0 != doc.x0 {
            return Err(Error::Domain("trajectory x0 does not match its first node"));
        }
        Ok(t)
    }

    fn locate(&self, x: f64) -> Result<(usize, f64)> {
        let lo = self.x0;
        let hi = self.nodes.last().map_or(lo, |n| n.x);
        if !(x >= lo && x <= hi) {
            return Err(Error::OutOfDomain { x, lo, hi });
        }
        let t = libm::log(x);
        let i = match self.ts.partition_point(|&ti| ti <= t) {
            0 => 0,
            k => (k - 1).min(self.ts.len() - 2),
        };
        Ok((i, t))
    }

    /// Interpolating polynomials of (q₁, q₂, v) in s = (t − tᵢ)/h.
    fn pieces(&self, i: usize) -> ([f64; 6], [f64; 6], [f64; 6], f64) {
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        let (da, db) = (&self.d2[i], &self.d2[i + 1]);
        let h = self.ts[i + 1] - self.ts[i];
        let q1 = quintic(a.q1, a.x * a.dq1, da[0], b.q1, b.x * b.dq1, db[0], h);
        let q2 = quintic(a.q2, a.x * a.dq2, da[1], b.q2, b.x * b.dq2, db[1], h);
        let dva = -a.x * (a.q1 * a.q1 + self.params.r * a.q2 * a.q2) / 2.0;
        let dvb = -b.x * (b.q1 * b.q1 + self.params.r * b.q2 * b.q2) / 2.0;
        let v = quintic(a.v, dva, da[2], b.v, dvb, db[2], h);
        (q1, q2, v, h)
    }

    /// ½∫_{tᵢ}^{t_end} (v − v(0)) dt for t_end inside interval i.
    fn half_integral(&self, i: usize, t_end: f64) -> f64 {
        let (_, _, v, h) = self.pieces(i);
        let v0 = self.params.v0();
        let len = t_end - self.ts[i];
        let mut acc = 0.0;
        for (u, w) in GL4 {
            let s = (0.5 + 0.5 * u) * len / h;
            acc += w * (poly(&v, s).0 - v0);
        }
        0.25 * len * acc
    }

    /// The integral of interval i under the cubic Hermite interpolant of v.
    fn half_integral_cubic(&self, i: usize) -> f64 {
        let (_, _, v, h) = self.pieces(i);
        let (f0, d0) = (v[0], v[1]);
        let (f1, d1, _) = poly(&v, 1.0);
        0.5 * h * ((f0 + f1) / 2.0 - self.params.v0() + (d0 - d1) / 12.0)
    }

    /// Interpolated state at x ∈ [x0, last node].
    pub fn eval(&self, x: f64) -> Result<PainleveState> {
        let (i, _) = self.locate(x)?;
        for n in &self.nodes[i..(i + 2).min(self.nodes.len())] {
            if n.x == x {
                return Ok(*n);
            }
        }
        Ok(self.eval_second(x)?.0)
    }

    /// Interpolated state together with (q₁″, q₂″) from the interpolant.
    pub fn eval_second(&self, x: f64) -> Result<(PainleveState, f64, f64)> {
        let (i, t) = self.locate(x)?;
        let (q1, q2, v, h) = self.pieces(i);
        let s = (t - self.ts[i]) / h;
        let (a1, b1, c1) = poly(&q1, s);
        let (a2, b2, c2) = poly(&q2, s);
        let (p1, p2) = (b1 / h, b2 / h);
        let (dd1, dd2) = (c1 / (h * h), c2 / (h * h));
        let st = PainleveState { x, q1: a1, dq1: p1 / x, q2: a2, dq2: p2 / x, v: poly(&v, s).0 };
        // q″ = (D²q − Dq)/x².
        Ok((st, (dd1 - p1) / (x * x), (dd2 - p2) / (x * x)))
    }

    /// I(s) = ½∫₀ˢ (v − v(0)) dx/x for s within the trajectory.
    pub(crate) fn big_i_inside(&self, s: f64) -> Result<f64> {
        if s < self.x0 {
            if !(s > 0.0) {
                return Err(Error::Domain("I requires s > 0"));
            }
            return Ok(self.cum_i[0] * s / self.x0);
        }
        let (i, t) = self.locate(s)?;
        Ok(self.cum_i[i] + self.half_integral(i, t))
    }

    /// Refinement error estimate of [`Self::big_i_inside`] up to s.
    pub(crate) fn big_i_inside_err(&self, s: f64) -> f64 {
        if s < self.x0 {
            return 0.0;
        }
        match self.locate(s) {
            Ok((i, _)) => self.cum_err[(i + 1).min(self.cum_err.len() - 1)],
            Err(_) => self.cum_err[self.cum_err.len() - 1],
        }
    }
}

impl From<Trajectory> for TrajectoryDoc {
    fn from(t: Trajectory) -> Self {
        t.to_doc()
    }
}

impl TryFrom<TrajectoryDoc> for Trajectory {
    type Error = Error;
    fn try_from(doc: TrajectoryDoc) -> Result<Self> {
        Trajectory::from_doc(doc)
    }
}
