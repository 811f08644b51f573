use std::f64::consts::PI;

use rayon::prelude::*;

use super::{interior, ClauseCheck, GridSpec, Tolerances};
use crate::error::Result;
use crate::maxwell::{vertical_tangent_check, x2_derivative_at_odd, x2_derivative_fd};
use crate::roots::{self, eval_a, near_integer, oracle_min_root};
use crate::special::{
    dg1_dm, dg1_dp, eval_g2tilde, eval_gtilde, eval_h, g2tilde_noise, gtilde_noise, ModulusM,
    SParam,
};

/// Oracle roots on the `s` grid.
struct SPoint {
    s: f64,
    x1: Result<f64>,
    x2: Result<f64>,
    /// First two positive roots of `h`, for `s >= 3`.
    h_roots: Option<Result<(f64, f64)>>,
}

fn oracle_h_roots(s: f64) -> Result<(f64, f64)> {
    let f = |x| eval_h(x, s);
    let noise = |x| gtilde_noise(x, s);
    let step = PI / (64.0 * s);
    let first = oracle_min_root(f, noise, roots::ORACLE_PMIN, 2.5 * PI, step)?.value;
    let second = oracle_min_root(f, noise, first + step / 2.0, 3.0 * PI, step)?.value;
    Ok((first, second))
}

impl SPoint {
    fn compute(s: f64) -> Self {
        let sp = SParam::new(s);
        let x1 = sp.clone().and_then(roots::oracle_x1).map(|r| r.value);
        let x2 = sp.and_then(roots::oracle_x2).map(|r| r.value);
        Self {
            s,
            x1,
            x2,
            h_roots: (s >= 3.0).then(|| oracle_h_roots(s)),
        }
    }
}

/// Position of `s` relative to the integers: `Some(true)` on `(2k, 2k+1)`,
/// `Some(false)` on `(2k+1, 2k+2)`, `None` at an integer.
fn parity_band(s: f64) -> Option<bool> {
    if near_integer(s).is_some() {
        return None;
    }
    Some(s - 2.0 * (s / 2.0).floor() < 1.0)
}

/// Number of sign changes of `f` on `n` samples of `[a, b]`, ignoring
/// values below `noise`.
fn sign_changes(f: impl Fn(f64) -> f64, noise: f64, a: f64, b: f64, n: usize) -> usize {
    let mut prev: Option<bool> = None;
    let mut count = 0;
    for i in 0..=n {
        let v = f(a + (b - a) * i as f64 / n as f64);
        if v.abs() <= noise {
            continue;
        }
        let neg = v < 0.0;
        if prev.is_some_and(|p| p != neg) {
            count += 1;
        }
        prev = Some(neg);
    }
    count
}

fn x1_band_violation(x1: f64, s: f64, half: f64) -> Option<f64> {
    parity_band(s).map(|below| {
        if below {
            (PI - half - x1).max(x1 - PI)
        } else {
            (PI - x1).max(x1 - PI - half)
        }
    })
}

pub fn verify_lemmas_props_on(grid: &GridSpec, tol: &Tolerances) -> Vec<ClauseCheck> {
    let slack = tol.slack;
    let pts: Vec<SPoint> = grid.s_values().into_par_iter().map(SPoint::compute).collect();

    let mut general = ClauseCheck::new("E.p1_general");
    let mut c1 = ClauseCheck::new("C1");
    let mut g12 = ClauseCheck::new("P.g1_2");
    let mut g21 = ClauseCheck::new("P.g2_1");
    let mut g22 = ClauseCheck::new("P.g2_2");
    let mut g23 = ClauseCheck::new("P.g2_3");
    let mut st = ClauseCheck::new("stat.g2_1");
    for p in &pts {
        let s = p.s;
        let w = (1.0 / s).asin();
        match &p.x1 {
            Ok(x1) => {
                if s > 2.0 {
                    general.record(s, (PI - w - x1).max(x1 - PI - w), &[*x1], slack);
                }
                if let Some(v) = x1_band_violation(*x1, s, w) {
                    c1.record(s, v, &[*x1], slack);
                }
                match eval_a(s) {
                    Ok(a) => {
                        if let Some(v) = x1_band_violation(*x1, s, a) {
                            g12.record(s, v, &[*x1, a], slack);
                        }
                    }
                    Err(e) => g12.record_error(s, e),
                }
            }
            Err(e) => {
                general.record_error(s, e);
                c1.record_error(s, e);
            }
        }
        match &p.x2 {
            Ok(x2) => {
                g21.record(s, x2 - 1.5 * PI, &[*x2], slack);
                if s >= 3.0 {
                    g21.record(s, -eval_g2tilde(1.5 * PI, s), &[], slack);
                    g22.record(s, (PI - w - x2).max(x2 - PI - 1.0 / (s - 2.0)), &[*x2], slack);
                }
                if let Some(v) = x2_side_violation(*x2, s) {
                    g23.record(s, v, &[*x2], slack);
                }
            }
            Err(e) => {
                g21.record_error(s, e);
                g22.record_error(s, e);
            }
        }
        if let Some(h) = &p.h_roots {
            match h {
                Ok((t1, t2)) => {
                    let v1 = match near_integer(s) {
                        Some(_) => (t1 - PI).abs() - tol.oracle_triple,
                        None if (s.floor() as u64) % 2 == 1 => (PI - w - t1).max(t1 - PI),
                        None => (PI - t1).max(t1 - PI - w),
                    };
                    let v2 = (2.0 * PI - w - t2).max(t2 - 2.0 * PI - w);
                    st.record(s, v1.max(v2), &[*t1, *t2], slack);
                }
                Err(e) => st.record_error(s, e),
            }
        }
    }
    // leading behaviour at the origin: sixth derivative -2 s (s^2 - 1)^3
    for s in [1.5f64, 3.0, 4.5, 10.0] {
        let x = 0.02 / s;
        let lead = -2.0 * s * (s * s - 1.0).powi(3) / 720.0;
        let ratio = eval_g2tilde(x, s) / x.powi(6) / lead;
        g21.record(s, (ratio - 1.0).abs() - 1e-2, &[ratio], 0.0);
    }

    let mut l1 = ClauseCheck::new("L1");
    let mut l1_samples = Vec::new();
    for k in 1..=grid.k_max {
        let kf = f64::from(k);
        l1_samples.extend(interior(2.0 * kf, 2.0 * kf + 1.0, 50));
        l1_samples.extend(interior(2.0 * kf + 1.0, 2.0 * kf + 2.0, 50));
    }
    for &s in &l1_samples {
        let w = (1.0 / s).asin();
        let f = |x| eval_gtilde(x, s);
        let noise = gtilde_noise(PI, s);
        let ok = if parity_band(s) == Some(true) {
            sign_changes(f, noise, PI - w, PI * (1.0 - 1e-12), 400) == 1
        } else {
            sign_changes(f, noise, PI - w, PI, 400) == 0
                && f(PI) > 0.0
                && sign_changes(f, noise, PI * (1.0 + 1e-12), PI + w, 400) == 1
        };
        l1.record_bool(s, ok, &[]);
    }

    let mut g11 = ClauseCheck::new("P.g1_1");
    for n in 2..=12u32 {
        let s = f64::from(n);
        let r = SParam::new(s).and_then(|sp| Ok((roots::x1(sp)?.value, roots::oracle_x1(sp)?.value)));
        match r {
            Ok((x, o)) => g11.record(
                s,
                ((x - PI).abs() - tol.exact).max((o - PI).abs() - tol.oracle_triple),
                &[x, o],
                0.0,
            ),
            Err(e) => g11.record_error(s, e),
        }
    }

    let mut l2 = ClauseCheck::new("L2");
    for nu in 2..=6u32 {
        let nuf = f64::from(nu);
        for j in 1..=8 {
            let delta = PI / 2.0 * f64::from(j) / 8.0;
            for s_minus in interior(1.0, nuf, 9) {
                let s_plus = 2.0 * nuf - s_minus;
                let a = eval_gtilde(PI - delta / s_minus, s_minus);
                let b = eval_gtilde(PI + delta / s_plus, s_plus);
                let implication = if a > 0.0 { b } else { f64::NEG_INFINITY };
                l2.record(s_minus, (a + b).max(implication), &[delta, s_plus, a, b], slack);
            }
        }
    }

    for k in 1..=grid.k_max {
        let kf = f64::from(k);
        let mut samples = interior(2.0 * kf + 2.0, 2.0 * kf + 3.0, grid.per_band);
        samples.push(2.0 * kf + 2.0);
        samples.extend(interior(2.0 * kf + 1.0, 2.0 * kf + 2.0 - 1.0 / (2.0 * kf + 2.0), grid.per_band));
        samples.push(2.0 * kf + 2.0 - 1.0 / (2.0 * kf + 2.0));
        for s in samples {
            match SParam::new(s).and_then(roots::oracle_x2) {
                Ok(r) => {
                    if let Some(v) = x2_side_violation(r.value, s) {
                        g23.record(s, v, &[r.value], slack);
                    }
                }
                Err(e) => g23.record_error(s, e),
            }
        }
    }

    let mut r21 = ClauseCheck::new("R.g2_1");
    for n in 1..=10u32 {
        let s = f64::from(2 * n + 1);
        let r = SParam::new(s).and_then(|sp| Ok((roots::x2(sp)?.value, roots::oracle_x2(sp)?.value)));
        match r {
            Ok((x, o)) => {
                let common = eval_h(PI, s).abs() - gtilde_noise(PI, s);
                let g = eval_g2tilde(PI, s).abs() - g2tilde_noise(PI, s);
                let v = ((x - PI).abs() - tol.exact).max((o - PI).abs() - 1e-9).max(common).max(g);
                r21.record(s, v, &[x, o], 0.0);
            }
            Err(e) => r21.record_error(s, e),
        }
    }

    let mut vert = ClauseCheck::new("p1'.vert");
    for k in 1..=grid.k_max {
        let kf = f64::from(k);
        let m = (kf + 1.0) / kf;
        let p = PI * (kf + 1.0);
        let dm = dg1_dm(p, m);
        let dp = dg1_dp(p, m);
        let tangents = [kf / (kf + 1.0), m]
            .iter()
            .all(|&mm| ModulusM::new(mm).and_then(vertical_tangent_check).unwrap_or(false));
        let v = ((dm + PI * kf).abs() - tol.exact * kf).max(dp.abs() - tol.exact);
        vert.record(m, if tangents { v } else { v.max(1.0) }, &[dm, dp], 0.0);
    }

    let mut odd = ClauseCheck::new("x2'.odd");
    for k in 1..=grid.k_max {
        let s = 2.0 * f64::from(k) + 1.0;
        let exact = x2_derivative_at_odd(k);
        match x2_derivative_fd(s) {
            Ok(fd) => odd.record(s, ((fd - exact) / exact).abs() - 1e-4, &[fd, exact], 0.0),
            Err(e) => odd.record_error(s, e),
        }
    }

    vec![general, l1, c1, g11, g12, l2, g21, r21, st, g22, g23, vert, odd]
}

/// Violation of the side of `pi` on which `x2(s)` must lie, where stated.
fn x2_side_violation(x2: f64, s: f64) -> Option<f64> {
    if s < 3.0 {
        return None;
    }
    let k = ((s - 1.0) / 2.0).floor();
    let t = s - (2.0 * k + 1.0);
    if t >= 1.0 {
        Some(PI - x2)
    } else if t > 0.0 && t <= 1.0 - 1.0 / (2.0 * k + 2.0) + 1e-15 {
        Some(x2 - PI)
    } else {
        None
    }
}
