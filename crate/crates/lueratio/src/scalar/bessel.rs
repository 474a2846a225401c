//! Bessel functions J, Y, I, K of real order and real argument.
//!
//! Uses Temme's series for x < 2 and Steed's continued fractions above,
//! with the order reduced to |μ| ≤ 1/2 and recovered by recurrence. This
//! keeps full double accuracy over the whole argument range without a
//! series/asymptotic switch point.

use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Which Bessel function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SpecialFnKind {
    BesselJ,
    BesselI,
    BesselK,
}

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const XMIN: f64 = 2.0;
const RESCALE: f64 = 1e250;

/// Taylor coefficients of 1/Γ(z) = Σ c_k z^k, k = 1..
const RGAMMA: [f64; 28] = [
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
    -1.1812593016974587695e-16,
    1.1866922547516003326e-18,
    1.4123806553180317816e-18,
];

/// Temme's γ₁, γ₂ and 1/Γ(1 ± μ) for |μ| ≤ 1/2.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    // 1/Γ(1+μ) = Σ c_k μ^{k-1}; split into even and odd powers of μ.
    let mut even = 0.0;
    let mut odd = 0.0;
    let mu2 = mu * mu;
    let mut pw = 1.0;
    for (i, &c) in RGAMMA.iter().enumerate() {
        let k = i + 1;
        if k % 2 == 1 {
            even += c * pw; // μ^{k-1}, k odd
        } else {
            odd += c * pw; // μ^{k-2}, k even
            pw *= mu2;
        }
    }
    let gampl = even + mu * odd;
    let gammi = even - mu * odd;
    (-odd, even, gampl, gammi)
}

fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * libm::floor(x / 2.0);
    libm::sin(PI * r)
}

fn cos_pi(x: f64) -> f64 {
    let r = x - 2.0 * libm::floor(x / 2.0);
    libm::cos(PI * r)
}

fn is_integer(x: f64) -> bool {
    libm::floor(x) == x
}

/// Hankel's large-argument expansion of J, Y and their derivatives, or
/// `None` when the asymptotic series cannot reach double accuracy.
fn jy_asymptotic(nu: f64, x: f64) -> Option<(f64, f64, f64, f64)> {
    let mu = 4.0 * nu * nu;
    let (mut p, mut q, mut r, mut s) = (1.0, 0.0, 1.0, 0.0);
    // a_k and b_k of the expansion, built incrementally.
    let mut a = 1.0f64;
    let mut converged = false;
    for k in 1..400 {
        let fk = k as f64;
        let odd = 2.0 * fk - 1.0;
        let b = a * (mu + 4.0 * fk * fk - 1.0) / (fk * 8.0 * x);
        let next = a * (mu - odd * odd) / (fk * 8.0 * x);
        if odd * odd > mu && next.abs() > a.abs() {
            break;
        }
        a = next;
        // Large intermediate terms would cancel away the leading digits.
        if a.abs().max(b.abs()) > 100.0 {
            return None;
        }
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
            r += sign * b;
        } else {
            q += sign * a;
            s += sign * b;
        }
        let scale = p.abs() + q.abs() + r.abs() + s.abs();
        if a.abs().max(b.abs()) < 1e-17 * scale {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    // χ = x − (ν/2 + 1/4)π, expanded so that x keeps its exact argument reduction.
    let c = 0.5 * nu + 0.25;
    let (cx, sx) = (libm::cos(x), libm::sin(x));
    let (cc, sc) = (cos_pi(c), sin_pi(c));
    let cchi = cx * cc + sx * sc;
    let schi = sx * cc - cx * sc;
    let amp = libm::sqrt(2.0 / (PI * x));
    Some((
        amp * (p * cchi - q * schi),
        amp * (p * schi + q * cchi),
        -amp * (r * schi + s * cchi),
        amp * (r * cchi - s * schi),
    ))
}

/// J_ν, Y_ν, J_ν', Y_ν' for ν ≥ 0, x > 0.
pub(crate) fn jy(nu: f64, x: f64) -> Result<(f64, f64, f64, f64)> {
    if x >= 25.0 {
        if let Some(v) = jy_asymptotic(nu, x) {
            return Ok(v);
        }
    }
    let maxit = 20_000 + 2 * x as usize;
    let nl = if x < XMIN { (nu + 0.5) as usize } else { libm::fmax(0.0, nu - x + 1.5) as usize };
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;
    let mut isign = 1.0;
    let mut h = nu * xi;
    if h < FPMIN {
        h = FPMIN;
    }
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..maxit {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { what: "bessel J continued fraction", iterations: maxit });
    }
    let mut rjl = isign * 1e-30;
    let mut rjpl = h * rjl;
    let mut rjl1 = rjl;
    let mut rjp1 = rjpl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let t = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * t - rjl;
        rjl = t;
        if rjl.abs() > RESCALE {
            rjl /= RESCALE;
            rjpl /= RESCALE;
            rjl1 /= RESCALE;
            rjp1 /= RESCALE;
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;
    let (rjmu, rymu, rymup, mut ry1);
    if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / libm::sin(pimu) };
        let d = -libm::log(x2);
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { libm::sinh(e) / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = 2.0 / PI * fact * (gam1 * libm::cosh(e) + gam2 * fact2 * d);
        let e = libm::exp(e);
        let mut p = e / (gampl * PI);
        let mut q = 1.0 / (e * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS { 1.0 } else { libm::sin(pimu2) / pimu2 };
        let r = PI * pimu2 * fact3 * fact3;
        let mut c = 1.0;
        let dd = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        let mut i = 1.0;
        loop {
            ff = (i * ff + p + q) / (i * i - xmu2);
            c *= dd / i;
            p /= i - xmu;
            q /= i + xmu;
            let del = c * (ff + r * q);
            sum += del;
            let del1 = c * p - i * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                break;
            }
            i += 1.0;
            if i > 1000.0 {
                return Err(Error::NonConvergence { what: "bessel Y series", iterations: 1000 });
            }
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fact = a * xi / (p * p + q * q);
        let mut cr = br + q * fact;
        let mut ci = bi + p * fact;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        let mut ok = false;
        for i in 2..maxit {
            a += 2.0 * (i as f64 - 1.0);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fact = a / (cr * cr + ci * ci);
            cr = br + cr * fact;
            ci = bi - ci * fact;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::NonConvergence { what: "bessel J/Y second fraction", iterations: maxit });
        }
        let gam = (p - f) / q;
        let mut m = libm::sqrt(w / ((p - f) * gam + q));
        if rjl < 0.0 {
            m = -m;
        }
        rjmu = m;
        rymu = rjmu * gam;
        rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }
    let fact = rjmu / rjl;
    let rj = rjl1 * fact;
    let rjp = rjp1 * fact;
    let mut ym = rymu;
    for i in 1..=nl {
        let t = (xmu + i as f64) * xi2 * ry1 - ym;
        ym = ry1;
        ry1 = t;
    }
    let _ = rymup;
    Ok((rj, ym, rjp, nu * xi * ym - ry1))
}

/// Exponentially scaled e^{−x}I_ν, e^{x}K_ν and their derivatives
/// (e^{−x}I_ν', e^{x}K_ν') for ν ≥ 0, x > 0.
pub(crate) fn ik_scaled(nu: f64, x: f64) -> Result<(f64, f64, f64, f64)> {
    let maxit = 20_000 + 2 * x as usize;
    let nl = (nu + 0.5) as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    // g = I_{ν+1}/I_ν = 1/(b₁ + 1/(b₂ + …)), b_k = 2(ν+k)/x, by modified Lentz.
    let mut g = FPMIN;
    let mut c = g;
    let mut d = 0.0;
    let mut converged = false;
    for k in 1..maxit {
        let b = xi2 * (nu + k as f64);
        d += b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        g *= del;
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { what: "bessel I continued fraction", iterations: maxit });
    }
    // Downward recurrence I_{l-1} = (2l/x) I_l + I_{l+1} from ν to μ on a scaled pair.
    let top = 1e-30;
    let mut hi = g * top; // I_{l+1}
    let mut lo = top; // I_l
    let mut scale_top = top;
    let mut l = nu;
    for _ in 0..nl {
        let t = 2.0 * l * xi * lo + hi;
        hi = lo;
        lo = t;
        l -= 1.0;
        if lo.abs() > RESCALE {
            lo /= RESCALE;
            hi /= RESCALE;
            scale_top /= RESCALE;
        }
    }
    let g_mu = hi / lo;
    let (rkmu, mut rk1);
    if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / libm::sin(pimu) };
        let d = -libm::log(x2);
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { libm::sinh(e) / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = fact * (gam1 * libm::cosh(e) + gam2 * fact2 * d);
        let mut sum = ff;
        let e = libm::exp(e);
        let mut p = 0.5 * e / gampl;
        let mut q = 0.5 / (e * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        let mut i = 1.0;
        loop {
            ff = (i * ff + p + q) / (i * i - xmu2);
            c *= dd / i;
            p /= i - xmu;
            q /= i + xmu;
            let del = c * ff;
            sum += del;
            let del1 = c * (p - i * ff);
            sum1 += del1;
            if del.abs() < sum.abs() * EPS {
                break;
            }
            i += 1.0;
            if i > 1000.0 {
                return Err(Error::NonConvergence { what: "bessel K series", iterations: 1000 });
            }
        }
        let ex = libm::exp(x);
        rkmu = sum * ex;
        rk1 = sum1 * xi2 * ex;
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - xmu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut ok = false;
        for i in 2..maxit {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::NonConvergence { what: "bessel K fraction", iterations: maxit });
        }
        h *= a1;
        rkmu = libm::sqrt(PI / (2.0 * x)) / s;
        rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
    }
    // I_μ (K_{μ+1} + K_μ I_{μ+1}/I_μ) = 1/x has no cancellation.
    let rimu = xi / (rk1 + g_mu * rkmu);
    let ri = rimu * scale_top / lo;
    let rip = ri * (g + nu * xi);
    let mut km = rkmu;
    for i in 1..=nl {
        let t = (xmu + i as f64) * xi2 * rk1 + km;
        km = rk1;
        rk1 = t;
    }
    Ok((ri, km, rip, nu * xi * km - rk1))
}

fn unscale_i(scaled: f64, x: f64) -> Result<f64> {
    if scaled == 0.0 {
        return Ok(0.0);
    }
    let lg = libm::log(scaled.abs()) + x;
    if lg > 709.0 {
        return Err(Error::Overflow("bessel I"));
    }
    Ok(scaled * libm::exp(x))
}

/// Value and x-derivative of the requested Bessel function.
pub fn bessel_with_derivative(kind: SpecialFnKind, nu: f64, x: f64) -> Result<(f64, f64)> {
    if !nu.is_finite() || !x.is_finite() {
        return Err(Error::Domain("bessel arguments must be finite"));
    }
    if x < 0.0 {
        return Err(Error::Domain("bessel requires x >= 0"));
    }
    let mu = nu.abs();
    if x == 0.0 {
        return match kind {
            SpecialFnKind::BesselK => Err(Error::Domain("bessel K requires x > 0")),
            _ if mu == 0.0 => Ok((1.0, 0.0)),
            _ if nu < 0.0 && !is_integer(nu) => Err(Error::Domain("negative non-integer order at x = 0")),
            _ if mu == 1.0 => Ok((0.0, 0.5)),
            _ => Ok((0.0, 0.0)),
        };
    }
    match kind {
        SpecialFnKind::BesselJ => {
            let (j, y, jp, yp) = jy(mu, x)?;
            if nu >= 0.0 {
                Ok((j, jp))
            } else if is_integer(mu) {
                let s = if (libm::fmod(mu, 2.0)) == 1.0 { -1.0 } else { 1.0 };
                Ok((s * j, s * jp))
            } else {
                let (c, s) = (cos_pi(mu), sin_pi(mu));
                Ok((c * j - s * y, c * jp - s * yp))
            }
        }
        SpecialFnKind::BesselI => {
            let (i, k, ip, kp) = ik_scaled(mu, x)?;
            if nu >= 0.0 || is_integer(mu) {
                Ok((unscale_i(i, x)?, unscale_i(ip, x)?))
            } else {
                let s = 2.0 / PI * sin_pi(mu);
                let e2 = libm::exp(-2.0 * x);
                Ok((unscale_i(i + s * k * e2, x)?, unscale_i(ip + s * kp * e2, x)?))
            }
        }
        SpecialFnKind::BesselK => {
            let (_, k, _, kp) = ik_scaled(mu, x)?;
            let e = libm::exp(-x);
            Ok((k * e, kp * e))
        }
    }
}

/// J_ν, I_ν or K_ν at x ≥ 0.
pub fn bessel(kind: SpecialFnKind, nu: f64, x: f64) -> Result<f64> {
    bessel_with_derivative(kind, nu, x).map(|v| v.0)
}

/// Exponentially scaled e^{−x}I_ν(x) for ν ≥ 0 (never overflows).
pub fn bessel_i_scaled(nu: f64, x: f64) -> Result<f64> {
    if x < 0.0 || nu < 0.0 {
        return Err(Error::Domain("bessel_i_scaled requires nu, x >= 0"));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    ik_scaled(nu, x).map(|v| v.0)
}
