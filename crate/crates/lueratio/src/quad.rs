//! Gauss rules and adaptive Gauss–Kronrod integration.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg;

/// Nodes and weights of a quadrature rule on [−1, 1].
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// Applies the rule to f on [a, b] (weight function in the rule's own variable).
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        self.nodes.iter().zip(&self.weights).map(|(&u, &w)| w * f(c + h * u)).sum::<f64>() * h
    }
}

/// Gauss–Legendre rule with n points, by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Jacobi rule for the weight (1−u)^a (1+u)^b on [−1, 1], a, b > −1,
/// from the eigen-decomposition of the Jacobi matrix.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<Rule> {
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::Domain("Gauss-Jacobi exponents must exceed -1"));
    }
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        diag[k] = if s.abs() < 1e-300 || (s + 2.0).abs() < 1e-300 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        if k + 1 < n {
            let k1 = kf + 1.0;
            let s1 = 2.0 * k1 + a + b;
            let num = 4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + a + b);
            let den = s1 * s1 * (s1 + 1.0) * (s1 - 1.0);
            off[k] = libm::sqrt(num / den);
        }
    }
    let mu0 = libm::exp(
        (a + b + 1.0) * core::f64::consts::LN_2 + libm::lgamma(a + 1.0) + libm::lgamma(b + 1.0)
            - libm::lgamma(a + b + 2.0),
    );
    let (vals, first) = linalg::tridiagonal_eigen(&diag, &off[..n.saturating_sub(1)], true)?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    let nodes = idx.iter().map(|&i| vals[i]).collect();
    let weights = idx.iter().map(|&i| mu0 * first[i] * first[i]).collect();
    Ok(Rule { nodes, weights })
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One 15-point Kronrod panel: (estimate, error estimate).
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = WGK[7] * fc;
    let mut rg = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub abs_err: f64,
}

/// Globally adaptive Gauss–Kronrod integration over the finite interval
/// [a, b]. Panels are split in a fixed order so results are deterministic.
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_panels: usize) -> Result<Estimate> {
    let (v, e) = gk15(&mut f, a, b);
    let mut panels = vec![(a, b, v, e)];
    loop {
        let value: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Estimate { value, abs_err: err });
        }
        if panels.len() >= max_panels {
            return Err(Error::ToleranceNotMet { estimate: err, tol: abs_tol.max(rel_tol * value.abs()) });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3).then(y.0.cmp(&x.0)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = panels[worst];
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        panels[worst] = (lo, mid, v1, e1);
        panels.insert(worst + 1, (mid, hi, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let r = gauss_legendre(10);
        for k in 0..20 {
            let got = r.integrate(0.0, 1.0, |x| libm::pow(x, k as f64));
            assert!((got - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "{k}");
        }
        let s: f64 = gauss_legendre(7).weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_moments() {
        // ∫_0^1 x^b x^k dx = 1/(b+k+1) with x = (1+u)/2.
        for &b in &[-0.5, 0.0, 1.0, 2.5] {
            let r = gauss_jacobi(12, 0.0, b).unwrap();
            for k in 0..15 {
                let got = r.integrate(0.0, 1.0, |x| libm::pow(x, k as f64)) * libm::pow(0.5, b);
                let want = 1.0 / (b + k as f64 + 1.0);
                assert!(((got - want) / want).abs() < 1e-13, "{b} {k} {got} {want}");
            }
        }
    }

    #[test]
    fn adaptive_handles_peaks() {
        let e = adaptive(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 1e-12, 2000).unwrap();
        let want = 2.0 * libm::atan(1.0 / 1e-2) / 1e-2;
        assert!((e.value - want).abs() < 1e-9 * want);
        let e = adaptive(libm::sin, 0.0, PI, 1e-14, 0.0, 100).unwrap();
        assert!((e.value - 2.0).abs() < 1e-13);
    }
}
