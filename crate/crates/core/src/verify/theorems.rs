use std::f64::consts::PI;

use rayon::prelude::*;

use super::{interior, ClauseCheck, GridSpec, MGrid, Tolerances};
use crate::error::Result;
use crate::maxwell::{
    crossing_enclosure_above, crossing_lower, crossing_upper, find_crossings, maxwell_times,
    p1_derivative, vertical_tangent_check,
};
use crate::roots::{
    self, hyperbola, p1_bounds, p1_hyperbola_side, p2_bounds, p2_hyperbola_side, s_of,
};
use crate::special::{const_rho, ModulusM};

fn p1(m: f64) -> Result<f64> {
    Ok(roots::p1(ModulusM::new(m)?)?.value)
}

fn p2(m: f64) -> Result<f64> {
    Ok(roots::p2(ModulusM::new(m)?)?.value)
}

/// Signed distance of `v` outside `[lo, hi]`.
fn outside(v: f64, lo: f64, hi: f64) -> f64 {
    (lo - v).max(v - hi)
}

/// Odd-integer `s` points carry a vertical tangent; finite-difference
/// proxies stay this far away from them in `s`.
fn far_from_odd(s: f64, gap: f64) -> bool {
    let r = (s - 1.0) / 2.0;
    (r - r.round()).abs() * 2.0 > gap
}

pub fn verify_theorem1_on(data: &MGrid, grid: &GridSpec, tol: &Tolerances) -> Vec<ClauseCheck> {
    let slack = tol.slack;

    let mut a = ClauseCheck::new("T1.a");
    for w in data.below.windows(2) {
        if let (Ok(x), Ok(y)) = (&w[0].p1_oracle, &w[1].p1_oracle) {
            a.record(w[1].m, x - y, &[w[0].m, *x, *y], slack);
        }
    }
    for w in data.above.windows(2) {
        if let (Ok(x), Ok(y)) = (&w[0].p1_oracle, &w[1].p1_oracle) {
            a.record(w[1].m, y - x, &[w[0].m, *x, *y], slack);
        }
    }
    for k in 1..=2 * grid.k_max {
        let kf = f64::from(k);
        for (m, exact) in [(kf / (kf + 2.0), PI * kf / 2.0), ((kf + 2.0) / kf, PI * (kf + 2.0) / 2.0)] {
            match (p1(m), ModulusM::new(m).and_then(roots::oracle_p1)) {
                (Ok(v), Ok(o)) => {
                    let viol = ((v - exact).abs() - tol.exact)
                        .max((o.value - exact).abs() - tol.oracle_triple);
                    a.record(m, viol, &[v, o.value, exact], 0.0);
                }
                (Err(e), _) | (_, Err(e)) => a.record_error(m, e),
            }
        }
    }

    let mut b = ClauseCheck::new("T1.b");
    for k in 1..=grid.k_max {
        let kf = f64::from(k);
        for (m, sign) in [(kf / (kf + 1.0), 1.0), ((kf + 1.0) / kf, -1.0)] {
            match one_sided_slopes(p1, m, sign) {
                Ok((wide, narrow)) => {
                    let ok = vertical_tangent_check(ModulusM::new(m).unwrap()).unwrap_or(false)
                        && sign * narrow > 0.0
                        && narrow.abs() >= 10.0 * wide.abs();
                    b.record_bool(m, ok, &[wide, narrow]);
                }
                Err(e) => b.record_error(m, e),
            }
        }
    }
    // smoothness proxy: implicit derivative against a central difference
    let sample: Vec<f64> = data
        .all()
        .map(|p| p.m)
        .step_by(20)
        .filter(|&m| far_from_odd(s_of(if m < 1.0 { m } else { 1.0 / m }), 0.05))
        .collect();
    let smooth: Vec<_> = sample
        .par_iter()
        .map(|&m| -> Result<(f64, f64)> {
            let d = p1_derivative(ModulusM::new(m)?)?;
            let h = 1e-6 * m;
            Ok((d, (p1(m + h)? - p1(m - h)?) / (2.0 * h)))
        })
        .collect();
    for (m, r) in sample.iter().zip(smooth) {
        match r {
            Ok((d, fd)) => b.record(*m, (d - fd).abs() / d.abs().max(1.0) - 1e-4, &[d, fd], 0.0),
            Err(e) => b.record_error(*m, e),
        }
    }

    let mut c = ClauseCheck::new("T1.c");
    let mut d = ClauseCheck::new("T1.d");
    let mut e = ClauseCheck::new("T1.e");
    let mut f = ClauseCheck::new("T1.f");
    let rho = const_rho();
    for pt in data.all() {
        let m = pt.m;
        let p = match &pt.p1_oracle {
            Ok(p) => *p,
            Err(err) => {
                c.record_error(m, err);
                continue;
            }
        };
        let hyp = hyperbola(m);
        if let Some(side) = p1_hyperbola_side(m) {
            let sgn = f64::from(side);
            c.record(m, sgn * (hyp - p), &[p, hyp], slack);
            match p1_bounds(m) {
                Ok(cert) if cert.clause == "T1.d" => {
                    let viol = if side < 0 { cert.lower - p } else { p - cert.upper };
                    d.record(m, viol, &[p, cert.lower, cert.upper], slack);
                }
                Ok(_) => {}
                Err(err) => d.record_error(m, err),
            }
        }
        if m < 1.0 / 3.0 {
            e.record(m, outside(p, (rho * m).max(hyp), 1.5 * PI * m), &[p], slack);
        } else if m > 3.0 {
            e.record(m, outside(p, rho.max(hyp), 1.5 * PI), &[p], slack);
        }
        f.record_bool(m, pt.p1_changed_sign && pt.p1.is_ok(), &[]);
    }
    vec![a, b, c, d, e, f]
}

/// Slopes of `p` at `m` over one-sided steps `1e-4` and `1e-6` on the side
/// selected by `dir`; at a vertical tangent the second is much larger.
fn one_sided_slopes(p: impl Fn(f64) -> Result<f64>, m: f64, dir: f64) -> Result<(f64, f64)> {
    let base = p(m)?;
    let slope = |h: f64| -> Result<f64> { Ok((p(m + dir * h)? - base) / (dir * h)) };
    Ok((slope(1e-4)?, slope(1e-6)?))
}

fn central_slope(p: impl Fn(f64) -> Result<f64>, m: f64, h: f64) -> Result<f64> {
    Ok((p(m + h)? - p(m - h)?) / (2.0 * h))
}

/// Bisection for the point in `(lo, hi)` where `p2` meets the hyperbola.
fn hyperbola_meeting(lo: f64, hi: f64) -> Result<f64> {
    let g = |m: f64| -> Result<f64> { Ok(p2(m)? - hyperbola(m)) };
    let (mut a, mut b) = (lo, hi);
    let ga = g(a)?;
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        if (g(mid)? < 0.0) == (ga < 0.0) {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

pub fn verify_theorem2_on(data: &MGrid, grid: &GridSpec, tol: &Tolerances) -> Vec<ClauseCheck> {
    let slack = tol.slack;

    let mut a = ClauseCheck::new("T2.a");
    for k in 1..=2 * grid.k_max {
        let kf = f64::from(k);
        for (m, exact) in [(kf / (kf + 1.0), PI * kf), ((kf + 1.0) / kf, PI * (kf + 1.0))] {
            match (p2(m), ModulusM::new(m).and_then(roots::oracle_p2)) {
                (Ok(v), Ok(o)) => {
                    let viol = ((v - exact).abs() - tol.exact).max((o.value - exact).abs() - 1e-9);
                    a.record(m, viol, &[v, o.value, exact], 0.0);
                }
                (Err(e), _) | (_, Err(e)) => a.record_error(m, e),
            }
        }
    }
    let mut b = ClauseCheck::new("T2.b");
    let crossings = find_crossings(grid.k_max);
    for k in 1..=grid.k_max {
        let (lo, hi) = (crossing_lower(k), crossing_upper(k));
        let (alo, ahi) = crossing_enclosure_above(k);
        let ends = (|| -> Result<[f64; 4]> {
            Ok([
                p2(lo)? - hyperbola(lo),
                p2(hi)? - hyperbola(hi),
                p2(alo)? - hyperbola(alo),
                p2(ahi)? - hyperbola(ahi),
            ])
        })();
        match ends {
            Ok(v) => {
                a.record(lo, v[0].max(-v[1]), &v, slack);
                a.record(alo, (-v[2]).max(v[3]), &v, slack);
                let below = hyperbola_meeting(lo, hi);
                let above = hyperbola_meeting(alo, ahi);
                let bars = crossings.as_ref().ok().map(|cs| {
                    let find = |lo: f64, hi: f64| {
                        cs.iter()
                            .find(|c| !c.trivial && c.k == k && c.m_bar > lo && c.m_bar < hi)
                            .map(|c| c.m_bar)
                    };
                    (find(lo, hi), find(alo, ahi))
                });
                match (below, above, bars) {
                    (Ok(ms1), Ok(ms2), Some((Some(mb1), Some(mb2)))) => {
                        b.record_bool(ms1, lo < ms1 && ms1 < mb1 && mb1 < hi, &[lo, ms1, mb1, hi]);
                        b.record_bool(ms2, alo < mb2 && mb2 < ms2 && ms2 < ahi, &[alo, mb2, ms2, ahi]);
                        for (mb, dir) in [(mb1, 1.0), (mb2, -1.0)] {
                            match (central_slope(p2, mb, 1e-4), central_slope(p2, mb, 1e-6)) {
                                (Ok(w), Ok(n)) => b.record_bool(
                                    mb,
                                    dir * n > 0.0 && n.abs() >= 10.0 * w.abs(),
                                    &[w, n],
                                ),
                                (Err(e), _) | (_, Err(e)) => b.record_error(mb, e),
                            }
                        }
                    }
                    (Err(e), _, _) | (_, Err(e), _) => b.record_error(lo, e),
                    _ => b.record_error(lo, "crossing not located"),
                }
            }
            Err(e) => a.record_error(lo, e),
        }
    }
    // bounded difference quotients on the sets where p2 is smooth
    let smooth_set = |m: f64| -> bool {
        let mu = if m < 1.0 { m } else { 1.0 / m };
        if mu < 0.5 {
            return true;
        }
        let s = s_of(mu);
        let k = ((s - 1.0) / 2.0).floor();
        let t = s - (2.0 * k + 1.0);
        t <= 1.0 - 1.0 / (2.0 * k + 2.0) - 1e-3 || t >= 1.0 + 1e-3
    };
    let sample: Vec<f64> = data
        .all()
        .map(|p| p.m)
        .step_by(20)
        .filter(|&m| smooth_set(m) && far_from_odd(s_of(if m < 1.0 { m } else { 1.0 / m }), 0.05))
        .collect();
    let quotients: Vec<_> = sample
        .par_iter()
        .map(|&m| Ok((central_slope(p2, m, 1e-5 * m)?, central_slope(p2, m, 1e-6 * m)?)))
        .collect::<Vec<Result<(f64, f64)>>>();
    for (m, r) in sample.iter().zip(quotients) {
        match r {
            Ok((w, n)) => b.record(*m, (w - n).abs() / n.abs().max(1.0) - 1e-3, &[w, n], 0.0),
            Err(e) => b.record_error(*m, e),
        }
    }

    let mut c = ClauseCheck::new("T2.c");
    let mut d = ClauseCheck::new("T2.d");
    let mut e = ClauseCheck::new("T2.e");
    for pt in data.all() {
        let m = pt.m;
        let p = match &pt.p2_oracle {
            Ok(p) => *p,
            Err(err) => {
                c.record_error(m, err);
                continue;
            }
        };
        match p2_bounds(m) {
            Ok(cert) => c.record(m, outside(p, cert.lower, cert.upper), &[p, cert.lower, cert.upper], slack),
            Err(err) => c.record_error(m, err),
        }
        if let Some(side) = p2_hyperbola_side(m) {
            let hyp = hyperbola(m);
            d.record(m, f64::from(side) * (hyp - p), &[p, hyp], slack);
        }
        e.record_bool(m, pt.p2_changed_sign && pt.p2.is_ok(), &[]);
    }
    vec![a, b, c, d, e]
}

pub fn verify_theorem3_on(data: &MGrid, grid: &GridSpec, tol: &Tolerances) -> Vec<ClauseCheck> {
    let slack = tol.slack;

    let mut a = ClauseCheck::new("T3.a");
    let sample: Vec<f64> = data.all().map(|p| p.m).step_by(10).collect();
    let jumps: Vec<_> = sample
        .par_iter()
        .map(|&m| -> Result<[f64; 4]> {
            let m2 = m * (1.0 + 1e-10);
            Ok([p1(m)?, p1(m2)?, p2(m)?, p2(m2)?])
        })
        .collect();
    for (m, r) in sample.iter().zip(jumps) {
        match r {
            Ok(v) => {
                let j = ((v[0] - v[1]).abs() / v[0].max(1.0)).max((v[2] - v[3]).abs() / v[2].max(1.0));
                a.record(*m, j - 1e-3, &v, 0.0);
            }
            Err(e) => a.record_error(*m, e),
        }
    }

    let mut b = ClauseCheck::new("T3.b");
    let mut c = ClauseCheck::new("T3.c");
    let order_side = |m: f64| -> Option<f64> {
        // +1 where p1 > p2 is asserted, -1 where p1 < p2
        if !(0.5..=2.0).contains(&m) {
            return Some(-1.0);
        }
        for k in 1..=64u32 {
            let kf = f64::from(k);
            if m < 1.0 {
                if m > kf / (1.0 + kf) && m <= crossing_lower(k) {
                    return Some(1.0);
                }
                if m >= crossing_upper(k) && m < (1.0 + kf) / (2.0 + kf) {
                    return Some(-1.0);
                }
            } else {
                let (alo, ahi) = crossing_enclosure_above(k);
                if m > (kf + 2.0) / (kf + 1.0) && m <= alo {
                    return Some(-1.0);
                }
                if m >= ahi && m < (kf + 1.0) / kf {
                    return Some(1.0);
                }
            }
        }
        None
    };
    for pt in data.all() {
        let (Ok(x), Ok(y)) = (&pt.p1_oracle, &pt.p2_oracle) else {
            c.record_error(pt.m, "root unavailable");
            continue;
        };
        if let Some(side) = order_side(pt.m) {
            let target = if pt.m < 0.5 || pt.m > 2.0 { &mut b } else { &mut c };
            target.record(pt.m, side * (y - x), &[*x, *y], slack);
        }
    }
    // stratified samples inside every ordered subinterval
    let mut bands = Vec::new();
    for k in 1..=grid.k_max {
        let kf = f64::from(k);
        let (alo, ahi) = crossing_enclosure_above(k);
        bands.push((kf / (1.0 + kf), crossing_lower(k)));
        bands.push((crossing_upper(k), (1.0 + kf) / (2.0 + kf)));
        bands.push(((kf + 2.0) / (kf + 1.0), alo));
        bands.push((ahi, (kf + 1.0) / kf));
    }
    let ms: Vec<f64> = bands.iter().flat_map(|&(lo, hi)| interior(lo, hi, grid.per_band)).collect();
    let vals: Vec<_> = ms.par_iter().map(|&m| Ok((p1(m)?, p2(m)?))).collect::<Vec<Result<_>>>();
    for (m, r) in ms.iter().zip(vals) {
        match (r, order_side(*m)) {
            (Ok((x, y)), Some(side)) => c.record(*m, side * (y - x), &[x, y], slack),
            (Ok(_), None) => c.record_error(*m, "sample outside the ordered sets"),
            (Err(e), _) => c.record_error(*m, e),
        }
    }
    match find_crossings(grid.k_max) {
        Ok(cs) => {
            for cp in cs {
                if cp.trivial {
                    let v = (|| Ok::<_, crate::Error>((p1(cp.m_bar)?, p2(cp.m_bar)?)))();
                    match v {
                        Ok((x, y)) => c.record(
                            cp.m_bar,
                            ((x - cp.p_at_crossing).abs()).max((y - cp.p_at_crossing).abs()) - tol.exact,
                            &[x, y, cp.p_at_crossing],
                            0.0,
                        ),
                        Err(e) => c.record_error(cp.m_bar, e),
                    }
                } else {
                    // p1 - p2 changes sign across the located crossing
                    let dm = 1e-6;
                    let diff = |m: f64| -> Result<f64> { Ok(p1(m)? - p2(m)?) };
                    match (diff(cp.m_bar - dm), diff(cp.m_bar + dm)) {
                        (Ok(l), Ok(r)) => {
                            let inside = cp.enclosure.0 < cp.m_bar && cp.m_bar < cp.enclosure.1;
                            c.record_bool(cp.m_bar, inside && l * r < 0.0, &[cp.enclosure.0, cp.m_bar, cp.enclosure.1, l, r]);
                        }
                        (Err(e), _) | (_, Err(e)) => c.record_error(cp.m_bar, e),
                    }
                }
            }
        }
        Err(e) => c.record_error(0.0, e),
    }

    let mut d = ClauseCheck::new("T3.d");
    for dd in [2i32, 3] {
        for m in [1.0 - 10f64.powi(-dd), 1.0 + 10f64.powi(-dd)] {
            match ModulusM::new(m).and_then(maxwell_times) {
                Ok(t) => d.record(m, 10f64.powi(dd - 1) - t.t1.min(t.t2), &[t.t1, t.t2], 0.0),
                Err(e) => d.record_error(m, e),
            }
        }
    }

    let mut e = ClauseCheck::new("T3.e");
    for k in 1..=grid.k_max {
        let kf = f64::from(k);
        for (m, sign) in [(kf / (kf + 1.0), 1.0), ((kf + 1.0) / kf, -1.0)] {
            let r = (|| -> Result<[f64; 4]> {
                let (w1, n1) = one_sided_slopes(p1, m, sign)?;
                Ok([w1, n1, central_slope(p2, m, 1e-4)?, central_slope(p2, m, 1e-6)?])
            })();
            match r {
                Ok([w1, n1, w2, n2]) => {
                    let ok = sign * n1 > 0.0
                        && n1.abs() >= 10.0 * w1.abs()
                        && sign * n2 > 0.0
                        && (w2 - n2).abs() <= 1e-3 * n2.abs()
                        && n2.abs() < n1.abs();
                    e.record_bool(m, ok, &[w1, n1, w2, n2]);
                }
                Err(err) => e.record_error(m, err),
            }
        }
    }
    vec![a, b, c, d, e]
}
