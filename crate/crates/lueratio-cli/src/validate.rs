//! The acceptance criteria, shared by `lueratio validate` and the
//! acceptance test target.

use std::time::Instant;

use lueratio::hankel::{self, default_precision};
use lueratio::limitdist::{self, big_i, big_i_on};
use lueratio::montecarlo::{self, Plan};
use lueratio::painleve::{self, Mode, SystemParams};
use lueratio::quad;
use lueratio::scalar::BigReal;

pub const COUNT: usize = 13;

/// Result of one criterion.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub seconds: f64,
    pub detail: String,
}

impl Outcome {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{:>2}  {verdict}  {:<34} {:>7.1}s  {}", self.id, self.title, self.seconds, self.detail)
    }
}

type Check = lueratio::Result<(bool, String)>;

struct Criterion {
    title: &'static str,
    budget_seconds: Option<f64>,
    check: fn() -> Check,
}

const CRITERIA: [Criterion; COUNT] = [
    Criterion { title: "small-s slope of I", budget_seconds: Some(30.0), check: small_s },
    Criterion { title: "large-s remainder of I", budget_seconds: Some(300.0), check: large_s },
    Criterion { title: "tail laws of q1 and q2", budget_seconds: None, check: tail_laws },
    Criterion { title: "Painleve vs Bessel determinant", budget_seconds: Some(600.0), check: cross_route },
    Criterion { title: "finite-n convergence to I", budget_seconds: Some(120.0), check: convergence },
    Criterion { title: "derivative identity", budget_seconds: None, check: derivative_identity },
    Criterion { title: "scaling identity", budget_seconds: Some(60.0), check: scaling_identity },
    Criterion { title: "y = 0 reduction", budget_seconds: None, check: y_zero },
    Criterion { title: "Monte Carlo vs finite n", budget_seconds: Some(180.0), check: mc_vs_finite },
    Criterion { title: "n = 2 direct quadrature", budget_seconds: None, check: two_eigenvalues },
    Criterion { title: "hard-edge law", budget_seconds: None, check: hard_edge },
    Criterion { title: "joint density normalization", budget_seconds: None, check: normalization },
    Criterion { title: "Q monotone and in [0, 1]", budget_seconds: None, check: monotone },
];

/// Runs criterion `id` (1-based), including its runtime budget.
pub fn run_criterion(id: usize) -> Outcome {
    let c = &CRITERIA[id - 1];
    let start = Instant::now();
    let result = (c.check)();
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = match result {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(b) = c.budget_seconds {
        if seconds > b {
            passed = false;
            detail.push_str(&format!("; over the {b} s budget"));
        }
    }
    Outcome { id, title: c.title, passed, seconds, detail }
}

fn params(alpha: f64, r: f64) -> lueratio::Result<SystemParams> {
    SystemParams::new(alpha, r)
}

fn solve(alpha: f64, r: f64, x_max: f64, tol: f64) -> lueratio::Result<painleve::Trajectory> {
    Ok(painleve::solve(params(alpha, r)?, x_max, tol, Mode::Collocate)?)
}

fn small_s() -> Check {
    let s = 1e-3;
    let mut worst: f64 = 0.0;
    for alpha in [0.0, 0.5, 1.0] {
        let v = big_i(s, params(alpha, 2.0)?, 1e-8)?;
        worst = worst.max((v.value / s + 1.0 / (2.0 * (alpha + 2.0))).abs());
    }
    Ok((worst <= 1e-3, format!("max |I(s)/s + 1/(2(a+2))| = {worst:.2e}")))
}

fn large_s() -> Check {
    let t = solve(0.0, 2.0, 200.0, 1e-10)?;
    let r = 2.0;
    let rem = |s: f64| -> lueratio::Result<f64> {
        Ok(big_i_on(&t, s)?.value + r * s / 4.0 - 2.0 * ((r - 1.0) * s).sqrt())
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for s in [50.0f64, 100.0, 200.0] {
        let v = rem(s)?;
        ok &= v.abs() <= 10.0 * s.ln();
        parts.push(format!("R({s}) = {v:.4}"));
    }
    let step = (rem(200.0)? - rem(100.0)?).abs();
    ok &= step <= 10.0 * std::f64::consts::LN_2;
    parts.push(format!("|R(200) - R(100)| = {step:.4}"));
    Ok((ok, parts.join(", ")))
}

/// Least-squares slope of ln|e| against ln x.
fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, e)| (x.ln(), e.abs().ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn tail_laws() -> Check {
    let t = solve(0.0, 2.0, 1e3, 1e-10)?;
    let res = painleve::tail_residuals(&t, &[100.0, 200.0, 400.0])?;
    let e1: Vec<(f64, f64)> = res.iter().map(|r| (r.0, r.1)).collect();
    let e2: Vec<(f64, f64)> = res.iter().map(|r| (r.0, r.2)).collect();
    let (k1, k2) = (loglog_slope(&e1), loglog_slope(&e2));
    let (a1, a2) = (e1[2].1.abs(), e2[2].1.abs());
    let ok = a1 <= 0.2 && a2 <= 0.2 && (k1 + 0.5).abs() <= 0.3 && (k2 + 1.0).abs() <= 0.3;
    Ok((ok, format!("|e1(400)| = {a1:.2e}, slope {k1:.2} (want -0.5 +- 0.3); |e2(400)| = {a2:.2e}, slope {k2:.2} (want -1 +- 0.3)")))
}

fn cross_route() -> Check {
    let mut worst: f64 = 0.0;
    for alpha in [0u32, 1] {
        for r in [1.5, 2.0, 3.0] {
            let a = limitdist::q_limit(r, alpha as f64, 1e-6)?.value;
            let b = limitdist::q_limit_bessel(r, alpha, 1e-7)?.value;
            worst = worst.max((a - b).abs());
        }
    }
    Ok((worst <= 5e-3, format!("max |Q_painleve - Q_bessel| = {worst:.2e}")))
}

fn convergence() -> Check {
    let i = big_i(4.0, params(0.0, 2.0)?, 1e-8)?.value;
    let delta = |n: usize| -> lueratio::Result<f64> {
        let p = default_precision(n).max(256);
        Ok((hankel::log_z_scaled(n, 0.0, 4.0, 2.0, p)?.to_f64() - i).abs())
    };
    let (d8, d16) = (delta(8)?, delta(16)?);
    let ratio = d16 / d8;
    let ok = d16 < d8 && (0.3..=0.8).contains(&ratio);
    Ok((ok, format!("D8 = {d8:.3e}, D16 = {d16:.3e}, ratio {ratio:.3}")))
}

fn derivative_identity() -> Check {
    let t = solve(0.0, 2.0, 10.0, 1e-10)?;
    let v4 = painleve::v_of_x(&t, 4.0)?;
    let scale = ((v4 - t.params.v0()) / 8.0).abs();
    let res = |n: usize| -> lueratio::Result<f64> { Ok(hankel::deriv_identity_residual(n, 4.0, &t, default_precision(n).max(256))?.abs()) };
    let (r8, r16) = (res(8)?, res(16)?);
    let ok = r16 <= 0.05 * scale && r16 < r8;
    Ok((ok, format!("res8 = {r8:.3e}, res16 = {r16:.3e}, 5% bound {:.3e}", 0.05 * scale)))
}

fn scaling_identity() -> Check {
    let p = 320;
    let bound = 2f64.powf(-(p as f64) / 2.0);
    let mut worst: f64 = 0.0;
    for n in [2usize, 4, 7] {
        for alpha in [-0.5, 0.0, 1.5] {
            for y in [0.01, 0.2, 1.5] {
                for r in [1.5, 3.0] {
                    let z = hankel::hankel_det(n, alpha, y, r, p)?;
                    let zt = hankel::z_tilde_det(n, alpha, y, r, p)?;
                    let e = BigReal::from_f64((n * n) as f64 + (alpha + 2.0) * n as f64, p);
                    let lhs = &(&z.log_z - &(&e * &BigReal::from_f64(y, p).ln())) - &zt.log_z;
                    worst = worst.max(lhs.abs().to_f64());
                }
            }
        }
    }
    Ok((worst <= bound, format!("max residual {worst:.2e} (bound {bound:.2e})")))
}

fn y_zero() -> Check {
    let mut worst: f64 = 0.0;
    for alpha in [-0.5, 0.0, 1.5] {
        for n in 1..=8 {
            let p = default_precision(n) + 64;
            let h = hankel::hankel_det(n, alpha, 0.0, 2.0, p)?;
            let z = hankel::z_hat(n, alpha + 2.0, p)?;
            let rel = (&h.log_z - &z).abs().to_f64() / z.abs().to_f64().max(1.0);
            worst = worst.max(rel);
        }
    }
    Ok((worst <= 1e-30, format!("max relative deviation {worst:.2e}")))
}

const MC_SEED: u64 = 0x5eed_2024;

fn mc_vs_finite() -> Check {
    let mut plan = Plan::new(8, 0.0, 200_000, MC_SEED);
    plan.workers = 32;
    let est = montecarlo::estimate_ratio_with(&plan, &[2.0])?[0];
    let q = hankel::q_finite(8, 0.0, 2.0, default_precision(8), 1e-8)?.value;
    let dev = (est.p_hat - q).abs();
    Ok((dev <= 3.0 * est.stderr, format!("p_hat = {:.5}, q = {q:.5}, |diff| = {dev:.2e}, 3 stderr = {:.2e}", est.p_hat, 3.0 * est.stderr)))
}

/// ∫∫ over {λ₁ < λ₂, λ₂ > r λ₁} of (λ₂ − λ₁)² e^{−2(λ₁+λ₂)} by nested
/// adaptive quadrature, truncated where the integrand is below e^{−80}.
fn two_eigenvalue_mass(r: f64) -> lueratio::Result<f64> {
    let span = 40.0;
    let inner = |l1: f64| -> f64 {
        let f = |l2: f64| (l2 - l1) * (l2 - l1) * (-2.0 * (l1 + l2)).exp();
        quad::adaptive(f, r * l1, r * l1 + span, 1e-16, 1e-13, 4000).map(|e| e.value).unwrap_or(f64::NAN)
    };
    let outer = quad::adaptive(inner, 0.0, span, 1e-16, 1e-13, 4000)?;
    if !outer.value.is_finite() {
        return Err(lueratio::Error::NonConvergence { what: "inner quadrature", iterations: 4000 });
    }
    Ok(outer.value)
}

fn two_eigenvalues() -> Check {
    let direct = two_eigenvalue_mass(2.0)? / two_eigenvalue_mass(1.0)?;
    let q = hankel::q_finite(2, 0.0, 2.0, 128, 1e-9)?.value;
    let dev = (q - direct).abs();
    Ok((dev <= 1e-6, format!("q_finite = {q:.10}, quadrature = {direct:.10}, closed form 26/27 = {:.10}", 26.0 / 27.0)))
}

fn hard_edge() -> Check {
    let xs: Vec<f64> = (0..=40).map(|k| k as f64 * 0.5).collect();
    let f0 = limitdist::f_hard_edge_curve(&xs, 0.0, 1e-6)?;
    let worst0 = xs.iter().zip(&f0).map(|(x, f)| (f.value - (-x / 4.0).exp()).abs()).fold(0.0, f64::max);
    let mut ok = worst0 <= 1e-3;
    let mut worst_excess = f64::NEG_INFINITY;
    let points = [2.0, 6.0, 12.0];
    for alpha in [0.0, 1.0] {
        let mut plan = Plan::new(32, alpha, 50_000, MC_SEED + 1);
        plan.workers = 32;
        let est = montecarlo::estimate_hard_edge_with(&plan, &points)?;
        let f = limitdist::f_hard_edge_curve(&points, alpha, 1e-6)?;
        for (e, f) in est.iter().zip(&f) {
            let excess = (e.p_hat - f.value).abs() - (3.0 * e.stderr + 0.02);
            worst_excess = worst_excess.max(excess);
            ok &= excess <= 0.0;
        }
    }
    Ok((ok, format!("max |F0 - exp(-x/4)| = {worst0:.2e}; worst MC slack {:.3}", -worst_excess)))
}

fn normalization() -> Check {
    let m = limitdist::joint_density_mass(0, 1e-6)?.value;
    let mut min_p = f64::INFINITY;
    for a in 1..=30 {
        for b in 1..=30 {
            let s1 = 2.0 * a as f64 - 1.5;
            let s2 = s1 + 2.0 * b as f64 * 60.0 / 61.0 - 1.9;
            if s2 > s1 && s2 <= 60.0 {
                min_p = min_p.min(limitdist::joint_density_bessel(s1, s2, 0)?);
            }
        }
    }
    let ok = (m - 1.0).abs() <= 1e-3 && min_p >= 0.0;
    Ok((ok, format!("mass = {m:.8}, min p on grid = {min_p:.3e}")))
}

fn monotone() -> Check {
    let rs: Vec<f64> = (0..10).map(|k| 1.1 + k as f64 * (6.0 - 1.1) / 9.0).collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for alpha in [0.0, 1.0] {
        let q: Vec<f64> = rs.iter().map(|&r| limitdist::q_limit(r, alpha, 1e-6).map(|v| v.value)).collect::<lueratio::Result<_>>()?;
        ok &= q.windows(2).all(|w| w[1] <= w[0]) && q.iter().all(|v| (0.0..=1.0).contains(v));
        parts.push(format!("a = {alpha}: Q(1.1) = {:.4}, Q(6) = {:.4}", q[0], q[9]));
    }
    Ok((ok, parts.join("; ")))
}
