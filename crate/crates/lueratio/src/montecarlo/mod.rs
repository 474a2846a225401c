//! Monte Carlo sampling of LUE spectra with weight λᵅ e^{−nλ}.
//!
//! Every sample draws from its own ChaCha8 stream keyed by (seed, index),
//! so estimates do not depend on how indices are split across workers.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg;

/// Position of one sample in the random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngState {
    pub seed: u64,
    pub index: u64,
}

impl RngState {
    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.index);
        rng
    }
}

/// Matrix realization used to draw a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "lowercase"))]
pub enum Backend {
    /// Bidiagonal chi model B Bᵀ/n, valid for any α > −1.
    Tridiagonal,
    /// X*X with X an (n+α) × n complex Gaussian matrix, integer α ≥ 0.
    Dense,
}

/// Eigenvalues of one sample, strictly positive and ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    n: usize,
    alpha: f64,
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Sorts the eigenvalues and checks positivity.
    pub fn new(alpha: f64, mut eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::Domain("a spectrum needs at least one eigenvalue"));
        }
        eigenvalues.sort_by(f64::total_cmp);
        if !(eigenvalues[0] > 0.0) || eigenvalues.iter().any(|v| !v.is_finite()) {
            return Err(Error::Eigensolver);
        }
        Ok(Self { n: eigenvalues.len(), alpha, eigenvalues })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// λ₂/λ₁, the ratio of the two smallest eigenvalues.
    pub fn ratio(&self) -> Option<f64> {
        self.eigenvalues.get(1).map(|l2| l2 / self.eigenvalues[0])
    }
}

/// Empirical P(λ₂/λ₁ > r).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RatioEstimate {
    pub r: f64,
    pub p_hat: f64,
    pub stderr: f64,
    pub num_samples: usize,
}

/// Empirical P(4n²λ_min > x).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HardEdgeEstimate {
    pub x: f64,
    pub p_hat: f64,
    pub stderr: f64,
    pub num_samples: usize,
}

fn binomial(count: u64, num_samples: usize) -> (f64, f64) {
    let p = count as f64 / num_samples as f64;
    (p, libm::sqrt(p * (1.0 - p) / num_samples as f64))
}

fn gamma_draw(rng: &mut ChaCha8Rng, shape: f64) -> Result<f64> {
    let g = Gamma::new(shape, 1.0).map_err(|_| Error::Domain("gamma shape must be positive"))?;
    Ok(g.sample(rng))
}

fn check_params(n: usize, alpha: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1"));
    }
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::Domain("alpha must exceed -1"));
    }
    Ok(())
}

/// Tridiagonal model: B lower bidiagonal with B_ii² ~ Γ(n+α−i+1) and
/// B_{i+1,i}² ~ Γ(n−i) (unit scale, i from 1), and T = B Bᵀ/n.
fn sample_tridiagonal(n: usize, alpha: f64, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let d: Vec<f64> = (0..n).map(|i| gamma_draw(rng, n as f64 + alpha - i as f64).map(libm::sqrt)).collect::<Result<_>>()?;
    let e: Vec<f64> = (0..n.saturating_sub(1)).map(|i| gamma_draw(rng, (n - 1 - i) as f64).map(libm::sqrt)).collect::<Result<_>>()?;
    let nf = n as f64;
    let diag: Vec<f64> = (0..n).map(|i| (d[i] * d[i] + if i > 0 { e[i - 1] * e[i - 1] } else { 0.0 }) / nf).collect();
    let off: Vec<f64> = (0..n.saturating_sub(1)).map(|i| d[i] * e[i] / nf).collect();
    let mut ev = linalg::tridiagonal_eigenvalues(&diag, &off)?;
    // QL is accurate only relative to the largest eigenvalue; the two smallest,
    // which can sit many decades lower for α near −1, come from B directly.
    let k = n.min(2);
    for (v, s) in ev.iter_mut().zip(linalg::bidiagonal_smallest_singular_values(&d, &e, k)?) {
        *v = s * s / nf;
    }
    Ok(ev)
}

/// Dense model: W = X*X with X of size (n+α) × n, entries with independent
/// real and imaginary parts of variance 1/(2n).
fn sample_dense(n: usize, alpha: f64, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    if alpha < 0.0 || alpha.fract() != 0.0 {
        return Err(Error::Domain("the dense backend needs integer alpha >= 0"));
    }
    let m = n + alpha as usize;
    let sd = libm::sqrt(1.0 / (2.0 * n as f64));
    let mut xr = vec![0.0; m * n];
    let mut xi = vec![0.0; m * n];
    for k in 0..m * n {
        let a: f64 = StandardNormal.sample(rng);
        let b: f64 = StandardNormal.sample(rng);
        xr[k] = sd * a;
        xi[k] = sd * b;
    }
    let mut wr = vec![0.0; n * n];
    let mut wi = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let (mut sr, mut si) = (0.0, 0.0);
            for k in 0..m {
                // conj(X_ki) X_kj
                let (ar, ai) = (xr[k * n + i], xi[k * n + i]);
                let (br, bi) = (xr[k * n + j], xi[k * n + j]);
                sr += ar * br + ai * bi;
                si += ar * bi - ai * br;
            }
            wr[i * n + j] = sr;
            wi[i * n + j] = si;
        }
    }
    linalg::hermitian_eigenvalues(&wr, &wi, n)
}

/// One LUE spectrum from the tridiagonal backend.
pub fn sample_lue(n: usize, alpha: f64, rng_state: RngState) -> Result<Spectrum> {
    sample_lue_with(n, alpha, rng_state, Backend::Tridiagonal)
}

/// One LUE spectrum from the chosen backend.
pub fn sample_lue_with(n: usize, alpha: f64, rng_state: RngState, backend: Backend) -> Result<Spectrum> {
    check_params(n, alpha)?;
    let mut rng = rng_state.rng();
    let ev = match backend {
        Backend::Tridiagonal => sample_tridiagonal(n, alpha, &mut rng)?,
        Backend::Dense => sample_dense(n, alpha, &mut rng)?,
    };
    Spectrum::new(alpha, ev)
}

/// Sampling plan shared by the estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plan {
    pub n: usize,
    pub alpha: f64,
    pub num_samples: usize,
    pub seed: u64,
    pub backend: Backend,
    /// Number of contiguous index blocks; only affects scheduling.
    pub workers: usize,
}

impl Plan {
    pub fn new(n: usize, alpha: f64, num_samples: usize, seed: u64) -> Self {
        Self { n, alpha, num_samples, seed, backend: Backend::Tridiagonal, workers: 1 }
    }
}

/// Per-threshold event counts over all samples, summed block by block in
/// index order.
fn count_events<F>(plan: &Plan, thresholds: usize, event: F) -> Result<Vec<u64>>
where
    F: Fn(&Spectrum, &mut [u64]) + Sync,
{
    check_params(plan.n, plan.alpha)?;
    let blocks = plan.workers.max(1);
    let per = plan.num_samples.div_ceil(blocks);
    let run = |b: usize| -> Result<Vec<u64>> {
        let mut c = vec![0u64; thresholds];
        let lo = b * per;
        let hi = ((b + 1) * per).min(plan.num_samples);
        for i in lo..hi {
            let s = sample_lue_with(plan.n, plan.alpha, RngState { seed: plan.seed, index: i as u64 }, plan.backend)?;
            event(&s, &mut c);
        }
        Ok(c)
    };
    #[cfg(feature = "parallel")]
    let parts: Vec<Result<Vec<u64>>> = {
        use rayon::prelude::*;
        (0..blocks).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<Result<Vec<u64>>> = (0..blocks).map(run).collect();
    let mut total = vec![0u64; thresholds];
    for p in parts {
        for (t, c) in total.iter_mut().zip(p?) {
            *t += c;
        }
    }
    Ok(total)
}

/// Empirical P(λ₂/λ₁ > r) for each r from one shared sample set.
pub fn estimate_ratio(n: usize, alpha: f64, r_values: &[f64], num_samples: usize, seed: u64) -> Result<Vec<RatioEstimate>> {
    estimate_ratio_with(&Plan::new(n, alpha, num_samples, seed), r_values)
}

pub fn estimate_ratio_with(plan: &Plan, r_values: &[f64]) -> Result<Vec<RatioEstimate>> {
    if plan.n < 2 {
        return Err(Error::Domain("the ratio needs n >= 2"));
    }
    if plan.num_samples < 1000 {
        return Err(Error::Domain("at least 1000 samples are required"));
    }
    let counts = count_events(plan, r_values.len(), |s, c| {
        let q = s.ratio().unwrap_or(f64::NAN);
        for (k, &r) in r_values.iter().enumerate() {
            // Strict inequality: a tie at machine precision is not an event.
            if q > r {
                c[k] += 1;
            }
        }
    })?;
    Ok(r_values
        .iter()
        .zip(counts)
        .map(|(&r, c)| {
            let (p_hat, stderr) = binomial(c, plan.num_samples);
            RatioEstimate { r, p_hat, stderr, num_samples: plan.num_samples }
        })
        .collect())
}

/// Empirical P(4n²λ_min > x) for each x from one shared sample set.
pub fn estimate_hard_edge(n: usize, alpha: f64, x_values: &[f64], num_samples: usize, seed: u64) -> Result<Vec<HardEdgeEstimate>> {
    estimate_hard_edge_with(&Plan::new(n, alpha, num_samples, seed), x_values)
}

pub fn estimate_hard_edge_with(plan: &Plan, x_values: &[f64]) -> Result<Vec<HardEdgeEstimate>> {
    if plan.num_samples == 0 {
        return Err(Error::Domain("at least one sample is required"));
    }
    let scale = 4.0 * (plan.n * plan.n) as f64;
    let counts = count_events(plan, x_values.len(), |s, c| {
        let v = scale * s.min();
        for (k, &x) in x_values.iter().enumerate() {
            if v > x {
                c[k] += 1;
            }
        }
    })?;
    Ok(x_values
        .iter()
        .zip(counts)
        .map(|(&x, c)| {
            let (p_hat, stderr) = binomial(c, plan.num_samples);
            HardEdgeEstimate { x, p_hat, stderr, num_samples: plan.num_samples }
        })
        .collect())
}

/// Smallest eigenvalues of num_samples draws, in index order.
pub fn sample_minima(plan: &Plan) -> Result<Vec<f64>> {
    check_params(plan.n, plan.alpha)?;
    (0..plan.num_samples)
        .map(|i| sample_lue_with(plan.n, plan.alpha, RngState { seed: plan.seed, index: i as u64 }, plan.backend).map(|s| s.min()))
        .collect()
}

/// Two-sample Kolmogorov–Smirnov statistic sup |F_a − F_b|.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

#[cfg(test)]
mod tests;
