use super::*;

fn plan(n: usize, alpha: f64, num_samples: usize, seed: u64) -> Plan {
    Plan::new(n, alpha, num_samples, seed)
}

#[test]
fn single_eigenvalue_is_exponential() {
    let m = sample_minima(&plan(1, 0.0, 100_000, 7)).unwrap();
    let mean = m.iter().sum::<f64>() / m.len() as f64;
    assert!((mean - 1.0).abs() < 0.01, "{mean}");
}

#[test]
fn eigenvalues_are_positive_and_sorted() {
    for i in 0..10_000u64 {
        let s = sample_lue(8, 0.5, RngState { seed: 3, index: i }).unwrap();
        assert_eq!(s.eigenvalues().len(), 8);
        assert!(s.min() > 0.0);
        assert!(s.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn spectrum_sorts_its_input() {
    let s = Spectrum::new(0.0, vec![3.0, 1.0, 2.0]).unwrap();
    assert_eq!(s.eigenvalues(), &[1.0, 2.0, 3.0]);
    assert_eq!(s.ratio(), Some(2.0));
    assert!(Spectrum::new(0.0, vec![1.0, -1.0]).is_err());
}

#[test]
fn first_moment_approaches_marchenko_pastur() {
    for &(n, alpha) in &[(10usize, 0.0), (40, 0.5)] {
        let draws = 2000u64;
        let mut total = 0.0;
        for i in 0..draws {
            let s = sample_lue(n, alpha, RngState { seed: 11, index: i }).unwrap();
            total += s.eigenvalues().iter().sum::<f64>() / n as f64;
        }
        let mean = total / draws as f64;
        // E[(1/n) Σλ] = (n + α)/n exactly.
        assert!((mean - (n as f64 + alpha) / n as f64).abs() < 0.01, "{n} {mean}");
    }
}

#[test]
fn ratio_estimates_are_nested() {
    let rs = [1.0, 1.5, 2.0, 3.0, 6.0];
    let est = estimate_ratio(6, 0.0, &rs, 5000, 1).unwrap();
    assert_eq!(est[0].p_hat, 1.0);
    for w in est.windows(2) {
        assert!(w[1].p_hat <= w[0].p_hat);
    }
    for e in &est {
        let want = libm::sqrt(e.p_hat * (1.0 - e.p_hat) / e.num_samples as f64);
        assert_eq!(e.stderr, want);
    }
}

#[test]
fn worker_count_does_not_change_estimates() {
    let mut p = plan(5, 0.3, 3001, 42);
    let a = estimate_ratio_with(&p, &[1.5, 2.5]).unwrap();
    p.workers = 7;
    let b = estimate_ratio_with(&p, &[1.5, 2.5]).unwrap();
    assert_eq!(a, b);
    let a = estimate_hard_edge_with(&p, &[0.0, 1.0]).unwrap();
    p.workers = 1;
    let b = estimate_hard_edge_with(&p, &[0.0, 1.0]).unwrap();
    assert_eq!(a, b);
    assert_eq!(a[0].p_hat, 1.0);
}

#[test]
fn backends_agree_in_distribution() {
    let mut p = plan(6, 2.0, 50_000, 5);
    let tri = sample_minima(&p).unwrap();
    p.backend = Backend::Dense;
    p.seed = 6;
    let dense = sample_minima(&p).unwrap();
    let d = ks_statistic(&tri, &dense);
    let critical = 1.628 * libm::sqrt(2.0 / 50_000.0);
    assert!(d < critical, "{d} {critical}");
}

#[test]
fn alpha_zero_hard_edge_is_exponential() {
    let est = estimate_hard_edge(32, 0.0, &[4.0], 20_000, 9).unwrap();
    let want = libm::exp(-1.0);
    assert!((est[0].p_hat - want).abs() <= 3.0 * est[0].stderr, "{}", est[0].p_hat);
}

#[test]
fn rejects_bad_inputs() {
    assert!(sample_lue(0, 0.0, RngState { seed: 0, index: 0 }).is_err());
    assert!(sample_lue(3, -1.0, RngState { seed: 0, index: 0 }).is_err());
    assert!(sample_lue_with(3, 0.5, RngState { seed: 0, index: 0 }, Backend::Dense).is_err());
    assert!(estimate_ratio(1, 0.0, &[2.0], 1000, 0).is_err());
    assert!(estimate_ratio(4, 0.0, &[2.0], 999, 0).is_err());
}

#[test]
fn ks_statistic_of_identical_samples_is_zero() {
    let a = [0.3, 0.1, 0.2];
    assert_eq!(ks_statistic(&a, &a), 0.0);
    assert_eq!(ks_statistic(&[0.0, 1.0], &[2.0, 3.0]), 1.0);
}

#[test]
fn tiny_smallest_eigenvalues_stay_positive() {
    // For α near −1 the smallest eigenvalue often falls below ulps of the largest.
    let mut below = 0;
    for i in 0..5000u64 {
        let s = sample_lue(16, -0.95, RngState { seed: 4, index: i }).unwrap();
        below += usize::from(s.min() < 1e-16 * s.eigenvalues()[15]);
        assert!(s.ratio().unwrap() >= 1.0);
    }
    assert!(below > 0);
}
