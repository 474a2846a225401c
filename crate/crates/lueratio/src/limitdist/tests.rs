use super::*;
use crate::scalar::{bessel, SpecialFnKind};

fn traj(alpha: f64, r: f64, x_max: f64, tol: f64) -> Trajectory {
    painleve::solve(SystemParams::new(alpha, r).unwrap(), x_max, tol, Mode::Collocate).unwrap()
}

#[test]
fn small_s_slope() {
    for &alpha in &[0.0, 0.5, 1.0] {
        let v = big_i(1e-3, SystemParams::new(alpha, 2.0).unwrap(), 1e-8).unwrap();
        let slope = v.value / 1e-3;
        assert!((slope + 1.0 / (2.0 * (alpha + 2.0))).abs() <= 1e-3, "{alpha} {slope}");
        assert!(v.value <= 0.0);
    }
}

#[test]
fn v_and_q_routes_agree() {
    let tol = 1e-10;
    for &(alpha, r) in &[(0.0, 2.0), (1.0, 2.0), (0.5, 3.0)] {
        let t = traj(alpha, r, 20.0, tol);
        for &s in &[0.5, 4.0, 20.0] {
            let v = big_i_on(&t, s).unwrap();
            let q = big_i_q_route(&t, s).unwrap();
            assert!((v.value - q).abs() <= 10.0 * tol * v.value.abs().max(1.0), "{alpha} {r} {s} {} {q}", v.value);
            assert!(v.abs_err_estimate < 1e-6, "{}", v.abs_err_estimate);
        }
    }
}

#[test]
fn large_s_remainder_is_logarithmic() {
    let t = traj(0.0, 2.0, 200.0, 1e-10);
    let r = |s: f64| big_i_on(&t, s).unwrap().value + 2.0 * s / 4.0 - 2.0 * libm::sqrt(s);
    for &s in &[50.0f64, 100.0, 200.0] {
        assert!(r(s).abs() <= 10.0 * libm::log(s), "{s} {}", r(s));
    }
    assert!((r(200.0) - r(100.0)).abs() <= 10.0 * core::f64::consts::LN_2);
}

#[test]
fn i_is_non_positive_and_decreasing() {
    for &(alpha, r) in &[(0.0, 1.5), (1.0, 4.0), (-0.5, 2.0)] {
        let t = traj(alpha, r, 50.0, 1e-9);
        let mut prev = 0.0;
        for k in 0..39 {
            let s = 1e-4 * libm::pow(1.4, k as f64);
            let v = big_i_on(&t, s).unwrap().value;
            assert!(v <= 0.0 && v <= prev, "{alpha} {r} {s} {v}");
            prev = v;
        }
    }
}

#[test]
fn big_i_rejects_uncovered_points() {
    let t = traj(1.0, 2.0, 10.0, 1e-8);
    assert!(matches!(big_i_on(&t, 20.0), Err(Error::OutOfDomain { .. })));
    assert!(big_i_on(&t, 0.0).is_err());
}

/// Q_α(r) by an independent double quadrature of the Bessel-determinant
/// density at double precision.
const Q_REF: &[(u32, f64, f64)] = &[
    (0, 1.5, 0.9894981318151984),
    (0, 2.0, 0.9526310732771838),
    (0, 3.0, 0.847417409323645),
    (0, 6.0, 0.5881681726255857),
    (1, 1.5, 0.9724880362590523),
    (1, 2.0, 0.8836621800090877),
    (1, 3.0, 0.6692889982021263),
    (1, 6.0, 0.29845271660634287),
];

#[test]
fn q_limit_matches_reference() {
    for &(alpha, r, want) in Q_REF {
        let q = q_limit(r, alpha as f64, 1e-6).unwrap();
        assert!((q.value - want).abs() < 1e-6, "{alpha} {r} {} {want}", q.value);
        assert!(q.abs_err_estimate < 1e-5, "{}", q.abs_err_estimate);
    }
}

#[test]
fn bessel_route_matches_reference() {
    for &(alpha, r, want) in Q_REF {
        let q = q_limit_bessel(r, alpha, 1e-7).unwrap();
        assert!((q.value - want).abs() < 1e-6, "{alpha} {r} {} {want}", q.value);
    }
}

#[test]
fn q_limit_is_monotone_in_r() {
    let mut prev = 1.0;
    for &r in &[1.01, 1.05, 1.5, 2.0, 4.0] {
        let q = q_limit(r, 0.0, 1e-6).unwrap().value;
        assert!(q <= prev && (0.0..=1.0).contains(&q), "{r} {q}");
        prev = q;
    }
    let q = q_limit(3.0, -0.5, 1e-6).unwrap().value;
    assert!(q > 0.0 && q < 1.0);
}

#[test]
fn q_limit_rejects_bad_inputs() {
    assert!(q_limit(1.0, 0.0, 1e-6).is_err());
    assert!(q_limit(2.0, -1.0, 1e-6).is_err());
    assert!(q_limit(2.0, 0.0, 1e-9).is_err());
    assert!(q_limit_bessel(2.0, 4, 1e-6).is_err());
}

#[test]
fn two_by_two_density_expands_by_hand() {
    for &(s1, s2) in &[(0.3, 0.9), (1.0, 5.0), (4.0, 30.0), (10.0, 10.5)] {
        let z = libm::sqrt(s2 - s1);
        let i = |m: f64| bessel(SpecialFnKind::BesselI, m, z).unwrap();
        let want = libm::exp(-s2 / 4.0) / 16.0 * (i(2.0) * i(2.0) - i(1.0) * i(3.0));
        let got = joint_density_bessel(s1, s2, 0).unwrap();
        assert!((got - want).abs() <= 1e-13 * want.abs().max(1e-300), "{s1} {s2} {got} {want}");
    }
}

#[test]
fn density_is_non_negative() {
    for alpha in 0..=3 {
        for a in 1..=30 {
            for b in 1..=30 {
                let s1 = 2.0 * a as f64 - 1.5;
                let s2 = s1 + 2.0 * b as f64 * 60.0 / 61.0 - 1.9;
                if s2 <= s1 || s2 > 60.0 {
                    continue;
                }
                let p = joint_density_bessel(s1, s2, alpha).unwrap();
                assert!(p >= 0.0, "{alpha} {s1} {s2} {p}");
            }
        }
    }
    assert!(joint_density_bessel(2.0, 1.0, 0).is_err());
}

#[test]
fn density_has_unit_mass() {
    for alpha in 0..=2 {
        let m = joint_density_mass(alpha, 1e-6).unwrap();
        assert!((m.value - 1.0).abs() < 1e-5, "{alpha} {}", m.value);
    }
}

#[test]
fn hard_edge_alpha_zero_is_exponential() {
    let xs: Vec<f64> = (0..=40).map(|k| k as f64 * 0.5).collect();
    let f = f_hard_edge_curve(&xs, 0.0, 1e-6).unwrap();
    for (x, v) in xs.iter().zip(&f) {
        let err = (v.value - libm::exp(-x / 4.0)).abs();
        assert!(err <= 1e-6, "{x} {}", v.value);
        // The estimate tracks the true error, which comes from the start data.
        assert!(err <= 1.5 * v.abs_err_estimate + 1e-15, "{x} {err} {}", v.abs_err_estimate);
    }
    // Beyond x ≈ 50 perturbations of the start grow past a 1e-10 tolerance.
    assert!(matches!(f_hard_edge(60.0, 0.0, 1e-10), Err(Error::ToleranceNotMet { .. })));
    assert_eq!(f_hard_edge(0.0, 1.5, 1e-8).unwrap().value, 1.0);
}

/// F_α from a Fredholm determinant of the Bessel kernel on (0, x) with a
/// 40-point Gauss–Legendre discretization in 30-digit arithmetic.
const F_REF: &[(f64, f64, f64)] = &[
    (1.0, 1.0, 0.98601309701325),
    (1.0, 2.0, 0.949877312549813),
    (1.0, 6.0, 0.706338395617657),
    (1.0, 12.0, 0.356425450023179),
    (1.0, 20.0, 0.114934403098171),
    (2.0, 1.0, 0.999604818799712),
    (2.0, 6.0, 0.946553461383155),
    (2.0, 20.0, 0.443996372471263),
];

#[test]
fn hard_edge_matches_bessel_kernel_determinant() {
    for &(alpha, x, want) in F_REF {
        let f = f_hard_edge(x, alpha, 1e-10).unwrap();
        assert!((f.value - want).abs() < 1e-7, "{alpha} {x} {} {want}", f.value);
    }
}

#[test]
fn hard_edge_decreases() {
    for &alpha in &[-0.5, 0.5, 1.0, 3.0] {
        let xs: Vec<f64> = (0..=40).map(|k| k as f64 * 0.5).collect();
        let f = f_hard_edge_curve(&xs, alpha, 1e-9).unwrap();
        for w in f.windows(2) {
            assert!(w[1].value < w[0].value, "{alpha}");
        }
    }
}

/// Converged values from an independent DOP853 integration (scipy) started
/// at ξ₀ = e^{−24/(α+1)} with the same corrected start data.
const F_NEGATIVE: &[(f64, f64, f64)] = &[
    (-0.5, 1.0, 0.4268892822795124),
    (-0.5, 6.0, 0.05466758000042633),
    (-0.5, 20.0, 0.0005627830843577673),
    (-0.9, 1.0, 0.07237197108888667),
    (-0.9, 6.0, 0.004093819241206429),
    (-0.9, 20.0, 1.5954620394682336e-05),
];

#[test]
fn hard_edge_negative_alpha() {
    for &(alpha, x, want) in F_NEGATIVE {
        let f = f_hard_edge(x, alpha, 1e-6).unwrap();
        assert!((f.value - want).abs() <= f.abs_err_estimate.max(1e-10), "{alpha} {x} {} {want}", f.value);
    }
    assert!(hard_edge_x0(-0.9) < 1e-60);
    assert!(matches!(f_hard_edge(1.0, -0.99, 1e-6), Err(Error::Domain(_))));
}
