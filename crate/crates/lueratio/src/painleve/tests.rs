use super::*;
use alloc::vec::Vec;
use proptest::prelude::*;

fn params(alpha: f64, r: f64) -> SystemParams {
    SystemParams::new(alpha, r).unwrap()
}

fn collocated(alpha: f64, r: f64, x_max: f64, tol: f64) -> Trajectory {
    solve(params(alpha, r), x_max, tol, Mode::Collocate).unwrap()
}

fn state_strategy() -> impl Strategy<Value = (f64, PainleveState, SystemParams)> {
    (1e-3f64..50.0, 0.05f64..0.95, 0.0f64..1.0, -2.0f64..2.0, -2.0f64..2.0, -0.9f64..4.0, 1.05f64..8.0).prop_map(
        |(x, rad, frac, dq1, dq2, alpha, r)| {
            // q on a circle of radius < 1 keeps S bounded away from zero.
            let ang = frac * core::f64::consts::FRAC_PI_2 * 0.98 + 0.01;
            let st = PainleveState { x, q1: rad * libm::cos(ang), dq1, q2: rad * libm::sin(ang), dq2, v: 0.0 };
            (x, st, SystemParams::new(alpha, r).unwrap())
        },
    )
}

proptest! {
    #[test]
    fn coefficient_determinant_is_x4_s3((x, st, _p) in state_strategy()) {
        let m = coefficient_matrix(x, &st);
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let s = st.s();
        let expect = x * x * x * x * s * s * s;
        prop_assert!((det - expect).abs() <= 1e-12 * expect.abs());
    }

    #[test]
    fn rhs_solves_both_equations((x, st, p) in state_strategy()) {
        let d = rhs(x, &st, &p).unwrap();
        let (res, mag) = equation_residuals(x, &st, d.ddq1, d.ddq2, &p);
        prop_assert!(res[0].abs() <= 1e-12 * mag[0], "{res:?} {mag:?}");
        prop_assert!(res[1].abs() <= 1e-12 * mag[1], "{res:?} {mag:?}");
        let dv = -(st.q1 * st.q1 + p.r * st.q2 * st.q2) / 2.0;
        prop_assert_eq!(d.dv, dv);
    }
}

#[test]
fn rhs_is_singular_on_the_unit_circle() {
    let p = params(1.0, 2.0);
    let ang: f64 = 0.3;
    let st = PainleveState { x: 1.0, q1: libm::cos(ang), dq1: 0.1, q2: libm::sin(ang), dq2: 0.2, v: 0.0 };
    assert!(matches!(rhs(1.0, &st, &p), Err(Error::Singular { .. })));
    let zero_q1 = PainleveState { q1: 0.0, q2: 0.5, ..st };
    assert!(matches!(rhs(1.0, &zero_q1, &p), Err(Error::Singular { .. })));
}

#[test]
fn origin_state_leading_order() {
    let x0 = 1e-9;
    let st = origin_state(x0, &params(0.0, 2.0)).unwrap();
    assert_eq!(st.q1, 1.0);
    assert_eq!(st.dq1, 0.0);
    for (alpha, r) in [(0.0, 2.0), (1.5, 3.0), (-0.5, 1.2)] {
        let p = params(alpha, r);
        let nu = p.nu();
        let st = origin_state(x0, &p).unwrap();
        let lead = (1.0 - 1.0 / r) * libm::pow(r * x0, nu / 2.0) / (libm::pow(2.0, nu) * libm::tgamma(nu + 1.0));
        assert!((st.q2 / lead - 1.0).abs() < 1e-8, "{alpha} {r}");
        let dlead = lead * nu / (2.0 * x0);
        assert!((st.dq2 / dlead - 1.0).abs() < 1e-8);
        assert!((st.q1 - libm::sqrt(2.0 / nu)).abs() < 1e-15);
        assert!((st.v - (p.v0() - x0 / nu)).abs() < 1e-15);
    }
    // The q₂ prefactor 1 − r⁻¹ increases towards 1 with r.
    let mut last = 0.0;
    for r in [1.1, 2.0, 10.0, 1e3] {
        let x = 1e-10;
        let st = origin_state(x, &params(0.0, r)).unwrap();
        let j = crate::scalar::bessel(crate::scalar::SpecialFnKind::BesselJ, 2.0, libm::sqrt(r * x)).unwrap();
        let pref = st.q2 / j;
        assert!(pref > last && pref < 1.0);
        last = pref;
    }
    assert!(origin_state(1e-3, &params(0.0, 2.0)).is_err());
}

#[test]
fn shoot_starts_at_origin_state() {
    for (alpha, r) in [(0.0, 2.0), (1.0, 2.0)] {
        let p = params(alpha, r);
        let x0 = default_x0(&p);
        let o = origin_state(x0, &p).unwrap();
        let t = match solve(p, 10.0, 1e-10, Mode::Shoot) {
            Ok(t) => t,
            Err(e) => *e.prefix.expect("prefix"),
        };
        let st = t.eval(x0).unwrap();
        assert_eq!(st.q1, o.q1);
        assert_eq!(st.q2, o.q2);
        assert_eq!(st.dq2, o.dq2);
        assert_eq!(st.v, o.v);
        if alpha == 0.0 {
            assert_eq!(st.dq1, o.dq1);
        }
    }
}

#[test]
fn reduced_case_matches_reference_integral() {
    // Independent reference from a high-accuracy IVP solve of the angle equation.
    let t = collocated(0.0, 2.0, 10.0, 1e-10);
    assert!((t.big_i_inside(1.0).unwrap() + 0.250_395_259_305).abs() < 1e-9);
    assert!((t.big_i_inside(4.0).unwrap() + 1.019_276_922_39).abs() < 1e-9);
    let s = solve(params(0.0, 2.0), 10.0, 1e-10, Mode::Shoot).unwrap();
    assert!((s.big_i_inside(4.0).unwrap() + 1.019_276_922_39).abs() < 1e-9);
}

#[test]
fn general_case_matches_reference_integral() {
    // Reference from an independent collocation solve of the same boundary value problem.
    let t = collocated(1.0, 2.0, 10.0, 1e-10);
    assert!((t.big_i_inside(1.0).unwrap() + 0.167_52).abs() < 2e-5);
    assert!((t.big_i_inside(4.0).unwrap() + 0.682_06).abs() < 2e-5);
}

#[test]
fn tail_laws_at_large_x() {
    let t = collocated(0.0, 2.0, 1e3, 1e-10);
    let res = tail_residuals(&t, &[100.0, 200.0, 400.0]).unwrap();
    let e1: Vec<f64> = res.iter().map(|r| r.1.abs()).collect();
    assert!(e1[0] > e1[1] && e1[1] > e1[2]);
    assert!(e1[2] <= 0.2);
    assert!(res[2].2.abs() <= 0.1);
    let tight = collocated(0.0, 2.0, 1e3, 1e-12);
    let res2 = tail_residuals(&tight, &[400.0]).unwrap();
    assert!((res2[0].2 - res[2].2).abs() < 1e-8);
    // Probes at nodes agree with the stored node values.
    let n = t.nodes[t.nodes.len() / 2];
    let at = tail_residuals(&t, &[n.x]).unwrap()[0];
    let k = 1.0;
    assert!((at.1 - (n.q1 * n.q1 * libm::sqrt(k * n.x) - 2.0)).abs() < 1e-12);
    assert!(tail_residuals(&t, &[2e3]).is_err());
}

#[test]
fn v_limits_monotonicity_and_continuity() {
    for alpha in [0.0, 1.0] {
        let t = collocated(alpha, 2.0, 50.0, 1e-10);
        let p = t.params;
        let near = v_of_x(&t, 1e-12).unwrap();
        assert!((near - p.v0()).abs() < 1e-10);
        if alpha == 0.0 {
            assert!((p.v0() - 15.0 / 8.0).abs() < 1e-15);
        }
        let mut prev = f64::INFINITY;
        for i in 0..400 {
            let x = 1e-6 * libm::pow(50.0 / 1e-6, i as f64 / 399.0);
            let v = v_of_x(&t, x).unwrap();
            assert!(v <= prev + 1e-12);
            prev = v;
        }
        let xs = t.x_switch;
        let lhs = t.eval(xs).unwrap().v;
        let rhs = v_of_x(&t, xs * (1.0 + 1e-12)).unwrap();
        assert!((lhs - rhs).abs() < 1e-9);
        assert!(v_of_x(&t, 0.0).is_err());
    }
}

#[test]
fn tolerance_and_x0_robustness() {
    for alpha in [0.0, 1.0] {
        let p = params(alpha, 2.0);
        let tol = 1e-9;
        let a = solve(p, 20.0, tol, Mode::Collocate).unwrap().eval(10.0).unwrap();
        let b = solve(p, 20.0, tol / 2.0, Mode::Collocate).unwrap().eval(10.0).unwrap();
        assert!((a.q1 - b.q1).abs() <= 10.0 * tol / 2.0);
        assert!((a.q2 - b.q2).abs() <= 10.0 * tol / 2.0);
        let x0 = default_x0(&p);
        let c = solve_from(p, x0, 20.0, tol, Mode::Collocate).unwrap().eval(1.0).unwrap();
        let d = solve_from(p, x0 / 2.0, 20.0, tol, Mode::Collocate).unwrap().eval(1.0).unwrap();
        let bound = (5.0 * tol).max(10.0 * p.r * x0);
        assert!((c.q1 - d.q1).abs() <= bound);
        assert!((c.q2 - d.q2).abs() <= bound);
    }
}

/// Residual of the angle equation D²θ = −(kx/4) sin θ cos θ + sin θ / cos³θ
/// with its term-magnitude sum.
fn theta_residual(p: &SystemParams, st: &PainleveState, dd1: f64, dd2: f64) -> (f64, f64) {
    let x = st.x;
    let th = libm::atan2(st.q2, st.q1);
    // θ″ from q″ for q = (cos θ, sin θ): θ″ = q₁q₂″ − q₂q₁″.
    let thx = st.q1 * st.dq2 - st.q2 * st.dq1;
    let thxx = st.q1 * dd2 - st.q2 * dd1;
    let (s, c) = (libm::sin(th), libm::cos(th));
    // D²θ = x²θ″ + xθ′.
    let terms = [x * x * thxx, x * thx, (p.r - 1.0) * x / 4.0 * s * c, -s / (c * c * c)];
    (terms.iter().sum(), terms.iter().map(|v| v.abs()).sum())
}

#[test]
fn dense_output_satisfies_the_equations() {
    for (alpha, r) in [(0.0, 2.0), (0.5, 1.5), (1.0, 4.0)] {
        let tol = 1e-10;
        let t = collocated(alpha, r, 50.0, tol);
        let p = t.params;
        for w in t.nodes.windows(2) {
            let x = libm::sqrt(w[0].x * w[1].x);
            let (st, dd1, dd2) = t.eval_second(x).unwrap();
            if p.is_reduced() {
                let (res, mag) = theta_residual(&p, &st, dd1, dd2);
                assert!(res.abs() <= 50.0 * tol * mag, "x = {x}: {res} vs {mag}");
            } else {
                let (res, mag) = equation_residuals(x, &st, dd1, dd2, &p);
                for k in 0..2 {
                    assert!(res[k].abs() <= 50.0 * tol * mag[k], "{alpha} {r} x = {x}: {res:?} vs {mag:?}");
                }
            }
        }
    }
}

#[test]
fn nodes_stay_on_the_physical_branch() {
    for (alpha, r) in [(0.0, 1.5), (0.5, 2.0), (1.0, 4.0), (-0.5, 2.0)] {
        let t = collocated(alpha, r, 100.0, 1e-9);
        assert_eq!(t.nodes[0].x, t.x0);
        for n in &t.nodes {
            let rad = n.q1 * n.q1 + n.q2 * n.q2;
            assert!(n.q1 > 0.0);
            assert!(rad > 0.0);
            if alpha > 0.0 {
                assert!(rad < 1.0);
            }
        }
        assert!(t.nodes.windows(2).all(|w| w[1].x > w[0].x));
    }
}

#[test]
fn reduced_shoot_and_collocate_agree() {
    for r in [1.5, 2.0, 4.0] {
        let tol = 1e-8;
        let a = solve(params(0.0, r), 20.0, tol, Mode::Shoot).unwrap().eval(10.0).unwrap();
        let b = collocated(0.0, r, 20.0, tol).eval(10.0).unwrap();
        assert!((a.q1 - b.q1).abs() <= 20.0 * tol);
        assert!((a.q2 - b.q2).abs() <= 20.0 * tol);
    }
}

#[test]
fn general_shoot_prefix_agrees_with_collocate() {
    for (alpha, r) in [(0.5, 2.0), (1.0, 1.5), (1.0, 4.0)] {
        let tol = 1e-8;
        let shot = match solve(params(alpha, r), 20.0, tol, Mode::Shoot) {
            Ok(t) => t,
            Err(e) => *e.prefix.expect("prefix"),
        };
        let b = collocated(alpha, r, 20.0, tol);
        let x = shot.nodes.last().unwrap().x;
        let (sa, sb) = (shot.eval(x).unwrap(), b.eval(x).unwrap());
        assert!((sa.q1 - sb.q1).abs() <= 20.0 * tol);
        assert!((sa.q2 - sb.q2).abs() <= 20.0 * tol);
    }
}

#[test]
fn solve_rejects_bad_inputs() {
    let p = params(0.0, 2.0);
    assert!(solve(p, 10.0, 1e-3, Mode::Shoot).is_err());
    assert!(solve(p, 1e-12, 1e-8, Mode::Shoot).is_err());
    assert!(SystemParams::new(-1.0, 2.0).is_err());
    assert!(SystemParams::new(0.0, 1.0).is_err());
}

#[test]
fn trajectory_rebuilds_from_its_document() {
    let t = collocated(1.0, 2.0, 10.0, 1e-8);
    let back = Trajectory::from_doc(t.to_doc()).unwrap();
    for x in [1e-6, 0.3, 4.0, 9.9] {
        assert_eq!(t.eval(x).unwrap(), back.eval(x).unwrap());
    }
    let mut doc = t.to_doc();
    doc.schema_version += 1;
    assert!(Trajectory::from_doc(doc).is_err());
}

#[test]
fn x_tail_cutoff() {
    assert_eq!(x_tail(&params(0.0, 2.0)), 1e4);
    let x = x_tail(&params(1.0, 2.0));
    assert!((1.0 / libm::sqrt(2.0 * x) - 0.02).abs() < 1e-12 || x == 1e4);
    assert!((x_tail(&params(0.5, 2.0)) - 312.5).abs() < 1e-9);
}
