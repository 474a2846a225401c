//! Finite-n quantities in configurable precision: moments of the deformed
//! weight (x − y)² xᵅ e^{−nx} on (yr, ∞), the Hankel determinant
//! Z_{n,α}(y; r), the partition function Ẑ_{n,α}, and Q_{n,α}(r).

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::limitdist::ProbabilityValue;
use crate::painleve::{self, Trajectory};
use crate::quad;
use crate::scalar::{log_gamma, upper_incomplete_gamma_ladder, BigReal};

/// Highest precision reached by automatic escalation.
pub const MAX_PRECISION: usize = 4096;

/// Default precision 64 + 12n bits for an n × n determinant.
pub fn default_precision(n: usize) -> usize {
    64 + 12 * n
}

/// Moments m_k = ∫ x^k w(x) dx for k = 0..=k_max.
#[derive(Debug, Clone)]
pub struct MomentTable {
    pub n: usize,
    pub alpha: f64,
    pub y: f64,
    pub r: f64,
    pub precision_bits: usize,
    pub m: Vec<BigReal>,
}

/// ln det of a Hankel moment matrix with its parameters.
#[derive(Debug, Clone)]
pub struct HankelResult {
    pub log_z: BigReal,
    pub n: usize,
    pub alpha: f64,
    pub y: f64,
    pub r: f64,
    pub precision_bits: usize,
}

fn check_common(n: usize, alpha: f64, r: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1"));
    }
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::Domain("alpha must exceed -1"));
    }
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::Domain("r must exceed 1"));
    }
    Ok(())
}

/// ∫_{lower}^∞ x^k (x − shift)² xᵅ e^{−rate·x} dx for k = 0..=k_max, from
/// the expansion (x − shift)² = x² − 2 shift x + shift² and a ladder of
/// Γ(α + 1 + j, rate·lower).
fn weighted_moments(rate: &BigReal, lower: &BigReal, shift: &BigReal, alpha: f64, k_max: usize) -> Result<Vec<BigReal>> {
    let p = rate.precision_bits();
    let a = BigReal::from_f64(alpha + 1.0, p);
    let g = upper_incomplete_gamma_ladder(&a, &(rate * lower), k_max + 2)?;
    let inv = rate.recip();
    // inv^{α+1+j} for j = 0..=k_max+2.
    let mut pw = Vec::with_capacity(k_max + 3);
    pw.push(inv.powf(&a));
    for j in 1..k_max + 3 {
        pw.push(&pw[j - 1] * &inv);
    }
    let two_shift = shift.mul_f64(2.0);
    let shift2 = shift * shift;
    Ok((0..=k_max)
        .map(|k| {
            let hi = &pw[k + 2] * &g[k + 2];
            let mid = &(&pw[k + 1] * &g[k + 1]) * &two_shift;
            let lo = &(&pw[k] * &g[k]) * &shift2;
            &(&hi - &mid) + &lo
        })
        .collect())
}

/// Moments of (x − y)² xᵅ e^{−nx} on (yr, ∞).
pub fn moments(n: usize, alpha: f64, y: f64, r: f64, k_max: usize, precision: usize) -> Result<MomentTable> {
    check_common(n, alpha, r)?;
    if !(y >= 0.0) || !y.is_finite() {
        return Err(Error::Domain("y must be finite and non-negative"));
    }
    let p = precision.max(64);
    let yb = BigReal::from_f64(y, p);
    let m = moments_big(n, alpha, &yb, r, k_max)?;
    Ok(MomentTable { n, alpha, y, r, precision_bits: p, m })
}

fn moments_big(n: usize, alpha: f64, y: &BigReal, r: f64, k_max: usize) -> Result<Vec<BigReal>> {
    let p = y.precision_bits();
    let rate = BigReal::from_i64(n as i64, p);
    let lower = y.mul_f64(r);
    weighted_moments(&rate, &lower, y, alpha, k_max)
}

/// ln det of the symmetric positive definite matrix (m_{i+j}) by elimination
/// with symmetric diagonal pivoting. A non-positive pivot certifies that
/// the working precision is insufficient.
fn log_det_hankel(m: &[BigReal], n: usize) -> Result<BigReal> {
    let p = m[0].precision_bits();
    let mut a: Vec<Vec<BigReal>> = (0..n).map(|i| (0..n).map(|j| m[i + j].clone()).collect()).collect();
    let mut log = BigReal::zero(p);
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).unwrap_or(core::cmp::Ordering::Equal)).unwrap_or(k);
        if piv != k {
            a.swap(piv, k);
            for row in a.iter_mut() {
                row.swap(piv, k);
            }
        }
        if !a[k][k].is_positive() || !a[k][k].is_finite() {
            return Err(Error::PrecisionInsufficient { bits: p });
        }
        log = &log + &a[k][k].ln();
        let inv = a[k][k].recip();
        for i in k + 1..n {
            let f = &a[i][k] * &inv;
            for j in k + 1..n {
                let t = &f * &a[k][j];
                a[i][j] = &a[i][j] - &t;
            }
        }
    }
    Ok(log)
}

/// Runs `f` at the requested precision, doubling it on certified failure.
fn escalate<T>(precision: usize, mut f: impl FnMut(usize) -> Result<T>) -> Result<(T, usize)> {
    let mut p = precision;
    loop {
        match f(p) {
            Err(Error::PrecisionInsufficient { bits }) if bits < MAX_PRECISION => p = (2 * p).min(MAX_PRECISION),
            other => return other.map(|v| (v, p)),
        }
    }
}

fn check_precision(n: usize, precision: usize) -> Result<()> {
    if precision < default_precision(n) {
        return Err(Error::Domain("precision must be at least 64 + 12n bits"));
    }
    Ok(())
}

fn z_log_big(n: usize, alpha: f64, y: &BigReal, r: f64) -> Result<BigReal> {
    let m = moments_big(n, alpha, y, r, 2 * n - 2)?;
    log_det_hankel(&m, n)
}

/// ln Z_{n,α}(y; r) = ln det(m_{i+j}), i, j = 0..n−1.
pub fn hankel_det(n: usize, alpha: f64, y: f64, r: f64, precision: usize) -> Result<HankelResult> {
    check_common(n, alpha, r)?;
    check_precision(n, precision)?;
    if !(y >= 0.0) || !y.is_finite() {
        return Err(Error::Domain("y must be finite and non-negative"));
    }
    let (log_z, p) = escalate(precision, |p| z_log_big(n, alpha, &BigReal::from_f64(y, p), r))?;
    Ok(HankelResult { log_z, n, alpha, y, r, precision_bits: p })
}

/// ln Z̃_{n,α}(y; r): the Hankel determinant of (x − 1)² xᵅ e^{−nyx} on [r, ∞).
pub fn z_tilde_det(n: usize, alpha: f64, y: f64, r: f64, precision: usize) -> Result<HankelResult> {
    check_common(n, alpha, r)?;
    check_precision(n, precision)?;
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::Domain("y must be positive for the rescaled weight"));
    }
    let (log_z, p) = escalate(precision, |p| {
        let rate = BigReal::from_f64(y, p).mul_f64(n as f64);
        let m = weighted_moments(&rate, &BigReal::from_f64(r, p), &BigReal::one(p), alpha, 2 * n - 2)?;
        log_det_hankel(&m, n)
    })?;
    Ok(HankelResult { log_z, n, alpha, y, r, precision_bits: p })
}

/// ln Ẑ_{n,α} = −ln n! − (n² + αn) ln n + Σ_{j=1}^n [ln j! + ln Γ(j + α)].
pub fn z_hat(n: usize, alpha: f64, precision: usize) -> Result<BigReal> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1"));
    }
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::Domain("alpha must exceed -1"));
    }
    let p = precision.max(64);
    let ln_n = BigReal::from_i64(n as i64, p).ln();
    let mut acc = &ln_n * &BigReal::from_f64(-((n * n) as f64) - alpha * n as f64, p);
    let mut ln_fact = BigReal::zero(p);
    for j in 1..=n {
        ln_fact = &ln_fact + &BigReal::from_i64(j as i64, p).ln();
        acc = &(&acc + &ln_fact) + &log_gamma(j as f64 + alpha, p)?;
    }
    Ok(&acc - &ln_fact)
}

/// Closed form of ln[Ẑ_{n−1,α+2}/Ẑ_{n,α}] for n ≥ 2:
/// (α+1) ln(n−1) + ln Γ(n+α+1) − ln (n−1)! − ln Γ(α+1) − ln Γ(α+2) + (n² + αn) ln(n/(n−1)).
pub fn z_hat_ratio(n: usize, alpha: f64, precision: usize) -> Result<BigReal> {
    if n < 2 {
        return Err(Error::Domain("the ratio needs n >= 2"));
    }
    let p = precision.max(64);
    let nm1 = BigReal::from_i64(n as i64 - 1, p);
    let ln_nm1 = nm1.ln();
    let mut ln_fact = BigReal::zero(p);
    for j in 2..n {
        ln_fact = &ln_fact + &BigReal::from_i64(j as i64, p).ln();
    }
    let quot = (&BigReal::from_i64(n as i64, p) / &nm1).ln();
    let e = BigReal::from_f64((n * n) as f64 + alpha * n as f64, p);
    let mut acc = &ln_nm1.mul_f64(alpha + 1.0) + &log_gamma(n as f64 + alpha + 1.0, p)?;
    acc = &acc - &ln_fact;
    acc = &acc - &log_gamma(alpha + 1.0, p)?;
    acc = &acc - &log_gamma(alpha + 2.0, p)?;
    Ok(&acc + &(&quot * &e))
}

/// ln Z_{n,α}(s/4n²; r) − ln Ẑ_{n,α+2}, which tends to I(s; r) as n → ∞.
pub fn log_z_scaled(n: usize, alpha: f64, s: f64, r: f64, precision: usize) -> Result<BigReal> {
    check_common(n, alpha, r)?;
    check_precision(n, precision)?;
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::Domain("s must be finite and non-negative"));
    }
    log_z_scaled_at(n, alpha, |p| BigReal::from_f64(s, p), r, precision)
}

/// log_z_scaled at an s built at the working precision.
fn log_z_scaled_at(n: usize, alpha: f64, s: impl Fn(usize) -> BigReal, r: f64, precision: usize) -> Result<BigReal> {
    let (v, _) = escalate(precision, |p| {
        let y = &s(p) / &BigReal::from_i64(4 * (n * n) as i64, p);
        let z = z_log_big(n, alpha, &y, r)?;
        Ok(&z - &z_hat(n, alpha + 2.0, p)?)
    })?;
    Ok(v)
}

/// Central difference of log_z_scaled in s with h = s·10⁻⁴ minus
/// (v(s) − v(0))/(2s) from the trajectory.
pub fn deriv_identity_residual(n: usize, s: f64, traj: &Trajectory, precision: usize) -> Result<f64> {
    let p = &traj.params;
    if !(s > 0.0) {
        return Err(Error::Domain("s must be positive"));
    }
    let bits = precision.max(192);
    let d = fd_derivative(n, p.alpha, s, p.r, s * 1e-4, bits)?;
    let v = painleve::v_of_x(traj, s)?;
    Ok(d - (v - p.v0()) / (2.0 * s))
}

/// Central difference (L(s+h) − L(s−h))/(2h) of log_z_scaled, with s ± h
/// formed exactly at the working precision.
pub fn fd_derivative(n: usize, alpha: f64, s: f64, r: f64, h: f64, precision: usize) -> Result<f64> {
    check_common(n, alpha, r)?;
    check_precision(n, precision)?;
    if !(h > 0.0 && s - h >= 0.0) || !s.is_finite() {
        return Err(Error::Domain("finite difference needs 0 < h <= s"));
    }
    let at = |sign: f64| move |p: usize| &BigReal::from_f64(s, p) + &BigReal::from_f64(sign * h, p);
    let hi = log_z_scaled_at(n, alpha, at(1.0), r, precision)?;
    let lo = log_z_scaled_at(n, alpha, at(-1.0), r, precision)?;
    Ok((&hi - &lo).to_f64() / (2.0 * h))
}

const GJ_POINTS: usize = 32;
/// Safety factor on the tail estimate from the measured log-slope.
const SLOPE_MARGIN: f64 = 4.0;

/// Q_{n,α}(r) = P(λ₂/λ₁ > r) at finite n:
/// (Ẑ_{n−1,α+2}/Ẑ_{n,α}) ((n−1)/n)^{(n−1)(n+1+α)} (4n(n−1))^{−1−α}
/// ∫₀^∞ xᵅ e^{−x/(4(n−1))} Z_{n−1,α}(x/(4(n−1)²); r)/Ẑ_{n−1,α+2} dx.
pub fn q_finite(n: usize, alpha: f64, r: f64, precision: usize, tol: f64) -> Result<ProbabilityValue> {
    if n < 2 {
        return Err(Error::Domain("q_finite needs n >= 2"));
    }
    check_common(n, alpha, r)?;
    if !(tol > 0.0 && tol <= 1e-2) {
        return Err(Error::Domain("tol must lie in (0, 1e-2]"));
    }
    let m = n - 1;
    let p = precision.max(default_precision(m));
    let nf = n as f64;
    let mf = m as f64;
    let ln_pref = z_hat_ratio(n, alpha, p)?.to_f64() + mf * (nf + 1.0 + alpha) * libm::log(mf / nf)
        - (1.0 + alpha) * libm::log(4.0 * nf * mf);
    let ln_hat = z_hat(m, alpha + 2.0, p)?;
    let scale = 4.0 * mf * mf;
    let failure = core::cell::RefCell::new(None);
    // ln of the integrand without the xᵅ factor.
    let ln_g = |x: f64| -> f64 {
        let y = &BigReal::from_f64(x, p) / &BigReal::from_f64(scale, p);
        match escalate(p, |q| z_log_big(m, alpha, &y.with_precision(q), r)) {
            Ok((z, _)) => (&z - &ln_hat).to_f64() - x / (4.0 * mf) + ln_pref,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                f64::NEG_INFINITY
            }
        }
    };
    let half = libm::pow(0.5, alpha);
    let head = quad::gauss_jacobi(GJ_POINTS, 0.0, alpha)?.integrate(0.0, 1.0, |x| libm::exp(ln_g(x))) * half;
    let coarse = quad::gauss_jacobi(GJ_POINTS / 2, 0.0, alpha)?.integrate(0.0, 1.0, |x| libm::exp(ln_g(x))) * half;
    let mut value = head;
    let mut err = (head - coarse).abs();
    let mut a = 1.0;
    let tail;
    loop {
        let b = 2.0 * a;
        let e = quad::adaptive(|x| libm::pow(x, alpha) * libm::exp(ln_g(x)), a, b, tol * 1e-3, 1e-12, 2000)?;
        value += e.value;
        err += e.abs_err;
        let (la, lb) = (alpha * libm::log(a) + ln_g(a), alpha * libm::log(b) + ln_g(b));
        let slope = (lb - la) / (b - a);
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        if slope < 0.0 {
            // ∫_b^∞ e^{lb + slope (x − b)} dx with the decay rate cut by the margin.
            let est = SLOPE_MARGIN * libm::exp(lb) / -slope;
            if est < tol * 1e-2 {
                tail = est;
                break;
            }
        } else if b > 1e7 {
            return Err(Error::TailBound("integrand log-slope is not negative"));
        }
        a = b;
    }
    ProbabilityValue::checked(value, err + tail + tol * 1e-3)
}
