//! Dormand–Prince 5(4) integrator with step observers.

use crate::error::{Error, Result};

/// Integrator settings.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; zero lets the integrator choose.
    pub h0: f64,
    pub max_steps: usize,
    /// Number of leading components entering the error norm.
    pub err_dims: usize,
    /// Bitmask of components controlled relative to their own magnitude,
    /// without the absolute floor.
    pub relative: u64,
}

impl Options {
    pub fn new(rtol: f64, atol: f64) -> Self {
        Self { rtol, atol, h0: 0.0, max_steps: 1_000_000, err_dims: usize::MAX, relative: 0 }
    }
}

/// Observer verdict after an accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn sq(x: f64) -> f64 {
    x * x
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut s = 0.0;
        for (c, k) in terms {
            s += c * k[i];
        }
        out[i] += h * s;
    }
    out
}

/// Integrates y' = f(t, y) from t0 towards t1 (either direction).
///
/// `h_cap(t, y)` bounds the step magnitude. `observe(t, y, y')` runs after
/// every accepted step, including the final one at t1, and may stop the
/// integration early. Returns the last accepted (t, y).
pub fn integrate<const N: usize, F, H, O>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    opts: &Options,
    mut h_cap: H,
    mut observe: O,
) -> Result<(f64, [f64; N])>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    H: FnMut(f64, &[f64; N]) -> f64,
    O: FnMut(f64, &[f64; N], &[f64; N]) -> Result<Flow>,
{
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let span = (t1 - t0).abs();
    let (mut t, mut y) = (t0, y0);
    if span == 0.0 {
        return Ok((t, y));
    }
    let ne = opts.err_dims.min(N);
    let mut k1 = f(t, &y)?;
    let floor = |i: usize| if i < 64 && opts.relative >> i & 1 == 1 { f64::MIN_POSITIVE } else { opts.atol };
    let scale = |y: &[f64; N], i: usize| floor(i) + opts.rtol * y[i].abs();
    let mut h = if opts.h0 > 0.0 {
        opts.h0
    } else {
        let d0 = libm::sqrt((0..ne).map(|i| sq(y[i] / scale(&y, i))).sum::<f64>());
        let d1 = libm::sqrt((0..ne).map(|i| sq(k1[i] / scale(&y, i))).sum::<f64>());
        let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h.min(span)
    };
    let mut steps = 0;
    let mut rejected_last = false;
    loop {
        let cap = h_cap(t, &y).abs();
        h = h.min(cap).min((t1 - t).abs());
        if h < 1e-14 * (1.0 + t.abs()) {
            return Err(Error::StepUnderflow { x: t });
        }
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::NonConvergence { what: "ODE step budget", iterations: opts.max_steps });
        }
        let hs = dir * h;
        let stages = (|| -> Result<_> {
            let k2 = f(t + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]))?;
            let k3 = f(t + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]))?;
            let k4 = f(t + C4 * hs, &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
            let k5 = f(t + C5 * hs, &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
            let k6 = f(t + hs, &axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]))?;
            let yn = axpy(&y, hs, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = f(t + hs, &yn)?;
            Ok((k3, k4, k5, k6, k7, yn))
        })();
        let (k3, k4, k5, k6, k7, yn) = match stages {
            Ok(v) => v,
            Err(e @ (Error::Singular { .. } | Error::BranchViolation { .. })) => {
                // A trial stage left the admissible region: retry smaller.
                if h < 1e-10 * span.max(1.0) {
                    return Err(e);
                }
                h *= 0.25;
                rejected_last = true;
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut err = 0.0;
        for i in 0..ne {
            let ei = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = floor(i) + opts.rtol * y[i].abs().max(yn[i].abs());
            err += sq(ei / sc);
        }
        let err = libm::sqrt(err / ne as f64);
        if !err.is_finite() {
            h *= 0.25;
            rejected_last = true;
            continue;
        }
        if err <= 1.0 {
            t = if (t1 - (t + hs)).abs() <= 1e-15 * (1.0 + t1.abs()) { t1 } else { t + hs };
            y = yn;
            k1 = k7;
            let done = t == t1;
            if observe(t, &y, &k1)? == Flow::Stop || done {
                return Ok((t, y));
            }
            let mut fac = 0.9 * libm::pow(err.max(1e-10), -0.2);
            fac = fac.clamp(0.2, if rejected_last { 1.0 } else { 5.0 });
            h *= fac;
            rejected_last = false;
        } else {
            h *= (0.9 * libm::pow(err, -0.2)).max(0.2);
            rejected_last = true;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let opts = Options::new(1e-11, 1e-13);
        let mut nsteps = 0;
        let (t, y) = integrate(
            |_, y: &[f64; 2]| Ok([y[1], -y[0]]),
            0.0,
            [0.0, 1.0],
            10.0,
            &opts,
            |_, _| f64::INFINITY,
            |_, _, _| {
                nsteps += 1;
                Ok(Flow::Continue)
            },
        )
        .unwrap();
        assert_eq!(t, 10.0);
        assert!((y[0] - libm::sin(10.0)).abs() < 1e-9);
        assert!(nsteps > 10);
    }

    #[test]
    fn backwards_and_stop() {
        let opts = Options::new(1e-10, 1e-12);
        let (t, y) = integrate(|_, y: &[f64; 1]| Ok([y[0]]), 1.0, [1.0], 0.0, &opts, |_, _| 0.1, |_, _, _| Ok(Flow::Continue)).unwrap();
        assert_eq!(t, 0.0);
        assert!((y[0] - libm::exp(-1.0)).abs() < 1e-9);
        let (t, _) = integrate(|_, y: &[f64; 1]| Ok([y[0]]), 0.0, [1.0], 5.0, &opts, |_, _| 0.1, |t, _, _| Ok(if t > 1.0 { Flow::Stop } else { Flow::Continue })).unwrap();
        assert!(t > 1.0 && t < 1.2);
    }
}
