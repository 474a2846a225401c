//! Small dense and tridiagonal linear algebra in double precision.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (length n−1) by implicit-shift QL. When `first_row` is
/// set, also returns the first component of each normalized eigenvector.
/// The output is in no particular order.
pub fn tridiagonal_eigen(diag: &[f64], off: &[f64], first_row: bool) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);
    let mut z = vec![0.0; if first_row { n } else { 0 }];
    if first_row && n > 0 {
        z[0] = 1.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Eigensolver);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let mut f = s * e[i];
                let b = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if first_row {
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z))
}

/// Sorted eigenvalues of a symmetric tridiagonal matrix.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let (mut d, _) = tridiagonal_eigen(diag, off, false)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Sorted eigenvalues of a Hermitian matrix given by row-major real and
/// imaginary parts. Householder reduction to real tridiagonal form, then QL.
pub fn hermitian_eigenvalues(re: &[f64], im: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut ar = re.to_vec();
    let mut ai = im.to_vec();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    let idx = |i: usize, j: usize| i * n + j;
    for k in 0..n.saturating_sub(1) {
        let len = n - k - 1;
        let mut vr: Vec<f64> = (0..len).map(|i| ar[idx(k + 1 + i, k)]).collect();
        let mut vi: Vec<f64> = (0..len).map(|i| ai[idx(k + 1 + i, k)]).collect();
        let norm = libm::sqrt(vr.iter().zip(&vi).map(|(a, b)| a * a + b * b).sum::<f64>());
        if norm == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let x0 = libm::hypot(vr[0], vi[0]);
        let (pr, pi) = if x0 == 0.0 { (1.0, 0.0) } else { (vr[0] / x0, vi[0] / x0) };
        // alpha = −phase·‖x‖ and v = x − alpha e₁.
        vr[0] += pr * norm;
        vi[0] += pi * norm;
        let vn = libm::sqrt(vr.iter().zip(&vi).map(|(a, b)| a * a + b * b).sum::<f64>());
        for i in 0..len {
            vr[i] /= vn;
            vi[i] /= vn;
        }
        off[k] = norm;
        // p = A v on the trailing block, including the column k coupling.
        let lo = k + 1;
        let mut qr = vec![0.0; len];
        let mut qi = vec![0.0; len];
        for i in 0..len {
            let (mut sr, mut si) = (0.0, 0.0);
            for j in 0..len {
                let (a, b) = (ar[idx(lo + i, lo + j)], ai[idx(lo + i, lo + j)]);
                sr += a * vr[j] - b * vi[j];
                si += a * vi[j] + b * vr[j];
            }
            qr[i] = sr;
            qi[i] = si;
        }
        let kk: f64 = (0..len).map(|i| vr[i] * qr[i] + vi[i] * qi[i]).sum();
        for i in 0..len {
            qr[i] -= kk * vr[i];
            qi[i] -= kk * vi[i];
        }
        for i in 0..len {
            for j in 0..len {
                // A −= 2(q v* + v q*)
                let a = qr[i] * vr[j] + qi[i] * vi[j] + vr[i] * qr[j] + vi[i] * qi[j];
                let b = qi[i] * vr[j] - qr[i] * vi[j] + vi[i] * qr[j] - vr[i] * qi[j];
                ar[idx(lo + i, lo + j)] -= 2.0 * a;
                ai[idx(lo + i, lo + j)] -= 2.0 * b;
            }
        }
        diag[k] = ar[idx(k, k)];
    }
    if n > 0 {
        diag[n - 1] = ar[idx(n - 1, n - 1)];
    }
    tridiagonal_eigenvalues(&diag, &off)
}

/// LU factorization with partial pivoting of a dense row-major matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    a: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(mut a: Vec<f64>, n: usize) -> Result<Self> {
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, big) = (k..n).map(|i| (i, a[i * n + k].abs())).fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if big == 0.0 || !big.is_finite() {
                return Err(Error::Singular { x: k as f64, what: "LU pivot" });
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let piv = a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / piv;
                a[i * n + k] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        a[i * n + j] -= f * a[k * n + j];
                    }
                }
            }
        }
        Ok(Self { n, a, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.a[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.a[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.a[i * n + i];
        }
        x
    }
}

/// Band matrix with kl sub- and ku super-diagonals, with room for the
/// fill-in of partial pivoting.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    w: usize,
    a: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let w = 2 * kl + ku + 1;
        Self { n, kl, ku, w, a: vec![0.0; n * w] }
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.kl + self.ku);
        i * self.w + (j + self.kl - i)
    }

    /// Sets entry (i, j), which must lie within the declared band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "entry outside band");
        let k = self.idx(i, j);
        self.a[k] = v;
    }

    /// LU factorization with partial pivoting, in O(n (kl + ku) kl).
    pub fn factor(mut self) -> Result<BandLu> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut big = -1.0;
            for i in k..=last {
                let v = self.a[self.idx(i, k)].abs();
                if v > big {
                    big = v;
                    p = i;
                }
            }
            if big == 0.0 || !big.is_finite() {
                return Err(Error::Singular { x: k as f64, what: "band LU pivot" });
            }
            piv[k] = p;
            let jmax = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let (a, b) = (self.idx(k, j), self.idx(p, j));
                    self.a.swap(a, b);
                }
            }
            let d = self.a[self.idx(k, k)];
            for i in k + 1..=last {
                let ik = self.idx(i, k);
                let f = self.a[ik] / d;
                self.a[ik] = f;
                if f != 0.0 {
                    for j in k + 1..=jmax {
                        let (a, b) = (self.idx(i, j), self.idx(k, j));
                        self.a[a] -= f * self.a[b];
                    }
                }
            }
        }
        Ok(BandLu { m: self, piv })
    }
}

#[derive(Debug, Clone)]
pub struct BandLu {
    m: BandMatrix,
    piv: Vec<usize>,
}

impl BandLu {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let m = &self.m;
        let (n, kl, ku) = (m.n, m.kl, m.ku);
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            for i in k + 1..=(k + kl).min(n - 1) {
                x[i] -= m.a[m.idx(i, k)] * x[k];
            }
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..=(i + kl + ku).min(n - 1) {
                s -= m.a[m.idx(i, j)] * x[j];
            }
            x[i] = s / m.a[m.idx(i, i)];
        }
        x
    }
}

/// Determinant of a small dense row-major matrix by pivoted elimination.
pub fn det(a: &[f64], n: usize) -> f64 {
    let mut m = a.to_vec();
    let mut sign = 1.0;
    let mut out = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[i * n + k].abs().total_cmp(&m[j * n + k].abs())).unwrap_or(k);
        if m[p * n + k] == 0.0 {
            return 0.0;
        }
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        let piv = m[k * n + k];
        out *= piv;
        for i in k + 1..n {
            let f = m[i * n + k] / piv;
            for j in k + 1..n {
                m[i * n + j] -= f * m[k * n + j];
            }
        }
    }
    sign * out
}

/// Number of singular values below σ of the bidiagonal matrix with diagonal
/// d and off-diagonal e, from the pivots of the Golub–Kahan matrix minus σI.
fn singular_count(d: &[f64], e: &[f64], sigma: f64) -> usize {
    let n = d.len();
    let mut neg = 0;
    let mut q = 1.0;
    for k in 0..2 * n {
        let c = if k == 0 {
            0.0
        } else if k % 2 == 1 {
            d[k / 2]
        } else {
            e[k / 2 - 1]
        };
        q = if k == 0 { -sigma } else { -sigma - c * c / q };
        if q == 0.0 {
            q = -f64::MIN_POSITIVE;
        }
        if q < 0.0 {
            neg += 1;
        }
    }
    neg - n
}

/// The k smallest singular values of a bidiagonal matrix, ascending, by
/// bisection on the Golub–Kahan form. Accurate to a few ulps relative to each
/// value, however small, where an eigensolver on B Bᵀ only reaches ulps of the
/// largest eigenvalue.
pub fn bidiagonal_smallest_singular_values(d: &[f64], e: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = d.len();
    if e.len() + 1 != n || k > n {
        return Err(Error::Domain("bidiagonal shape mismatch"));
    }
    let bound = (0..n).map(|i| d[i].abs() + if i < n - 1 { e[i].abs() } else { 0.0 } + if i > 0 { e[i - 1].abs() } else { 0.0 }).fold(0.0, f64::max);
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let (mut lo, mut hi) = (out.last().copied().unwrap_or(0.0), bound * (1.0 + 4.0 * f64::EPSILON) + f64::MIN_POSITIVE);
        let mut iterations = 0;
        while hi - lo > 2.0 * f64::EPSILON * hi {
            // Geometric steps while a bracket spans many decades.
            let mid = if lo > 0.0 && hi > 4.0 * lo { libm::sqrt(lo * hi) } else if lo == 0.0 { hi / 16.0 } else { 0.5 * (lo + hi) };
            if mid <= lo || mid >= hi || !(mid > 0.0) {
                break;
            }
            if singular_count(d, e, mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
            iterations += 1;
            if iterations > 4000 {
                return Err(Error::NonConvergence { what: "singular value bisection", iterations });
            }
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_toeplitz() {
        // Eigenvalues of tridiag(−1, 2, −1) are 2 − 2cos(kπ/(n+1)).
        let n = 9;
        let vals = tridiagonal_eigenvalues(&vec![2.0; n], &vec![-1.0; n - 1]).unwrap();
        for (k, v) in vals.iter().enumerate() {
            let want = 2.0 - 2.0 * libm::cos((k + 1) as f64 * core::f64::consts::PI / (n + 1) as f64);
            assert!((v - want).abs() < 1e-13);
        }
    }

    #[test]
    fn hermitian_matches_known_spectrum() {
        // [[2, i], [−i, 2]] has eigenvalues 1 and 3.
        let v = hermitian_eigenvalues(&[2.0, 0.0, 0.0, 2.0], &[0.0, 1.0, -1.0, 0.0], 2).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-14 && (v[1] - 3.0).abs() < 1e-14);
        // Trace and Frobenius norm are preserved for a 4×4 example.
        let n = 4;
        let mut re = vec![0.0; 16];
        let mut im = vec![0.0; 16];
        for i in 0..n {
            for j in 0..n {
                re[i * n + j] = 1.0 / (1.0 + (i + j) as f64);
                im[i * n + j] = if i == j { 0.0 } else { (i as f64 - j as f64) * 0.3 };
            }
        }
        let v = hermitian_eigenvalues(&re, &im, n).unwrap();
        let tr: f64 = (0..n).map(|i| re[i * n + i]).sum();
        let fro: f64 = re.iter().chain(&im).map(|x| x * x).sum();
        assert!((v.iter().sum::<f64>() - tr).abs() < 1e-13);
        assert!((v.iter().map(|x| x * x).sum::<f64>() - fro).abs() < 1e-12);
    }

    #[test]
    fn lu_solves() {
        let a = vec![4.0, 3.0, 0.0, 3.0, 4.0, -1.0, 0.0, -1.0, 4.0];
        let lu = Lu::factor(a.clone(), 3).unwrap();
        let x = lu.solve(&[24.0, 30.0, -24.0]);
        for i in 0..3 {
            let r: f64 = (0..3).map(|j| a[i * 3 + j] * x[j]).sum::<f64>() - [24.0, 30.0, -24.0][i];
            assert!(r.abs() < 1e-12);
        }
        assert!((det(&a, 3) - 24.0).abs() < 1e-12);
    }

    #[test]
    fn band_lu_matches_dense() {
        let n = 9;
        let (kl, ku) = (2, 3);
        let mut band = BandMatrix::zeros(n, kl, ku);
        let mut dense = vec![0.0; n * n];
        for i in 0..n {
            for j in i.saturating_sub(kl)..(i + ku + 1).min(n) {
                // Small diagonal forces pivoting.
                let v = if i == j { 0.01 } else { 1.0 + ((3 * i + 7 * j) % 5) as f64 };
                band.set(i, j, v);
                dense[i * n + j] = v;
            }
        }
        let b: Vec<f64> = (0..n).map(|i| i as f64 - 3.0).collect();
        let x1 = band.factor().unwrap().solve(&b);
        let x2 = Lu::factor(dense, n).unwrap().solve(&b);
        for (a, c) in x1.iter().zip(&x2) {
            assert!((a - c).abs() < 1e-10 * (1.0 + c.abs()));
        }
    }

    #[test]
    fn bidiagonal_singular_values_are_relatively_accurate() {
        // B = diag(1, 1e-20) has singular values 1e-20 and 1.
        let s = bidiagonal_smallest_singular_values(&[1.0, 1e-20], &[0.0], 2).unwrap();
        assert!((s[0] / 1e-20 - 1.0).abs() < 1e-14 && (s[1] - 1.0).abs() < 1e-14);
        // Against the eigenvalues of B Bᵀ for a well-conditioned case.
        let d = [1.5, 0.7, 2.0, 0.9];
        let e = [0.3, 1.1, 0.4];
        let diag: Vec<f64> = (0..4).map(|i| d[i] * d[i] + if i > 0 { e[i - 1] * e[i - 1] } else { 0.0 }).collect();
        let off: Vec<f64> = (0..3).map(|i| d[i] * e[i]).collect();
        let ev = tridiagonal_eigenvalues(&diag, &off).unwrap();
        let sv = bidiagonal_smallest_singular_values(&d, &e, 4).unwrap();
        for (a, b) in ev.iter().zip(&sv) {
            assert!((a - b * b).abs() < 1e-13 * a, "{a} {b}");
        }
        // det B = Π d is tiny: the smallest value follows it to full precision.
        let sv = bidiagonal_smallest_singular_values(&[1.0, 1e-30, 1.0], &[1.0, 1.0], 1).unwrap();
        // 80-digit SVD reference.
        assert!((sv[0] / 5e-31 - 1.0).abs() < 1e-13, "{}", sv[0]);
    }
}
