use std::f64::consts::PI;

use approx::assert_relative_eq;
use plateball::special::*;
use proptest::prelude::*;

fn m_below() -> impl Strategy<Value = f64> {
    0.02f64..0.98
}

fn central(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

#[test]
fn degenerate_line_is_identically_zero() {
    for i in 0..200 {
        let p = 0.05 * f64::from(i);
        assert_eq!(eval_g1(p, 1.0), 0.0);
        assert_eq!(eval_g2(p, 1.0), 0.0);
    }
}

#[test]
fn constants_solve_their_equations() {
    // 30-digit references
    assert_relative_eq!(const_rho(), 4.493409457909064, max_relative = 1e-15);
    assert_relative_eq!(const_rho2(), 5.763459196894550, max_relative = 1e-15);
    let r = const_rho();
    assert!((r.tan() - r).abs() < 1e-12);
    assert!((eval_big_g(const_rho2()).unwrap() - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn series_branches_are_continuous() {
    for x in [0.9e-4, 1.1e-4] {
        assert!((eval_f(x).unwrap() - (1.0 - x * x / 3.0)).abs() < 1e-15);
    }
    let t = SERIES_THRESHOLD.sqrt();
    let (a, b) = (eval_big_g(t * (1.0 - 1e-9)).unwrap(), eval_big_g(t * (1.0 + 1e-9)).unwrap());
    assert!((a - b).abs() < 1e-9, "{a} {b}");
    // either side of the switch at s x = 1, against 50-digit values
    assert_relative_eq!(eval_j(0.999 / 4.0, 4.0).unwrap(), 0.0003192593855380528, max_relative = 1e-12);
    assert_relative_eq!(eval_j(1.001 / 4.0, 4.0).unwrap(), 0.00032253223642869194, max_relative = 1e-12);
}

#[test]
fn poles_and_asymptotes_are_reported() {
    assert!(matches!(eval_f(PI), Err(plateball::Error::Pole { .. })));
    assert!(matches!(eval_big_g(2.0 * PI), Err(plateball::Error::Pole { .. })));
    assert!(matches!(eval_j(PI, 2.0), Err(plateball::Error::Asymptote { .. })));
    assert!(eval_f(0.0).is_err() && eval_j(1.0, 1.0).is_err());
}

proptest! {
    #[test]
    fn g1_in_the_x_chart(m in m_below(), x in 0.0f64..8.0) {
        let s = (1.0 + m) / (1.0 - m);
        let p = x * (s - 1.0) / 2.0;
        let lhs = eval_g1(p, m);
        let rhs = -(1.0 - m) / 2.0 * eval_gtilde(x, s);
        prop_assert!((lhs - rhs).abs() <= 4.0 * g1_noise(p, m), "{lhs} {rhs}");
    }

    #[test]
    fn g2_in_the_x_chart(m in 0.1f64..0.9, x in 0.0f64..8.0) {
        let s = (1.0 + m) / (1.0 - m);
        let p = x * (s - 1.0) / 2.0;
        let lhs = eval_g2(p, m);
        let rhs = (1.0 - m).powi(2) / 8.0 * eval_g2tilde(x, s);
        prop_assert!((lhs - rhs).abs() <= 4.0 * g2_noise(p, m), "{lhs} {rhs}");
    }

    #[test]
    fn reflection_m_to_inverse(m in m_below(), q in 0.0f64..20.0) {
        let a = eval_g1(m * q, m);
        let b = -m * eval_g1(q, 1.0 / m);
        prop_assert!((a - b).abs() <= 4.0 * g1_noise(q, 1.0 / m));
        let a = eval_g2(m * q, m);
        let b = -m * m * eval_g2(q, 1.0 / m);
        prop_assert!((a - b).abs() <= 4.0 * g2_noise(q, 1.0 / m));
    }

    #[test]
    fn g1_partials(m in 0.05f64..3.0, p in 0.1f64..12.0) {
        prop_assume!((m - 1.0).abs() > 1e-3);
        let h = 1e-6;
        let fd_p = central(|p| eval_g1(p, m), p, h);
        let fd_m = central(|m| eval_g1(p, m), m, h * m);
        let scale = 1.0 + p / m;
        prop_assert!((fd_p - dg1_dp(p, m)).abs() < 1e-6 * scale * scale);
        prop_assert!((fd_m - dg1_dm(p, m)).abs() < 1e-6 * scale * scale * scale / m);
    }

    #[test]
    fn g2tilde_partials(s in 1.1f64..12.0, x in 0.05f64..6.0) {
        let h = 1e-6;
        let fd_x = central(|x| eval_g2tilde(x, s), x, h);
        let fd_s = central(|s| eval_g2tilde(x, s), s, h);
        let scale = (1.0 + s * x).powi(2) * (1.0 + s) * (1.0 + s);
        prop_assert!((fd_x - dg2tilde_dx(x, s)).abs() < 1e-7 * scale, "{fd_x} {}", dg2tilde_dx(x, s));
        prop_assert!((fd_s - dg2tilde_ds(x, s)).abs() < 1e-7 * scale, "{fd_s} {}", dg2tilde_ds(x, s));
    }

    #[test]
    fn j_derivative(s in 1.2f64..8.0, x in 0.05f64..6.0) {
        let h = 1e-6;
        prop_assume!(eval_h(x, s).abs() > 0.05 && eval_h(x - h, s).abs() > 0.05 && eval_h(x + h, s).abs() > 0.05);
        let fd = central(|x| eval_j(x, s).unwrap(), x, h);
        let exact = dj_dx(x, s).unwrap();
        prop_assert!(exact >= 0.0);
        prop_assert!((fd - exact).abs() < 1e-5 * (1.0 + exact), "{fd} {exact}");
    }

    #[test]
    fn f_and_g_are_consistent(x in 1e-3f64..9.0) {
        prop_assume!(x.sin().abs() > 1e-3);
        let f = eval_f(x).unwrap();
        let g = eval_big_g(x).unwrap();
        prop_assert!((g * x * x - (1.0 - f)).abs() < 1e-12 * (1.0 + f.abs()));
    }

    #[test]
    fn chart_round_trip(m in m_below(), x in 0.01f64..10.0) {
        let mm = ModulusM::new(m).unwrap();
        let s = m_to_s(mm).unwrap();
        prop_assert!((s_to_m(s).unwrap().get() - m).abs() < 1e-14);
        let p = x_to_p(XVar::new(x).unwrap(), s);
        prop_assert!((p_to_x(p, mm).unwrap().get() - x).abs() < 1e-12 * x.max(1.0));
    }
}
