//! First Maxwell times, their exact values, the crossings of `p1` and `p2`,
//! and derivative behaviour.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::{self, bracket::refine_root, Bracket};
use crate::special::{
    dg1_dm, dg1_dp, dg2tilde_ds, dg2tilde_dx, eval_g2tilde, g2tilde_noise, ModulusM, SParam,
};

/// `|dg1/dp|` below this counts as a vertical tangent of `p1`.
pub const TANGENT_TOL: f64 = 1e-8;

/// Crossing tolerance in `m`.
pub const CROSSING_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxwellTimes {
    pub m: f64,
    pub t1: f64,
    pub t2: f64,
}

/// `t1 = 2 p1(m) / m`, `t2 = 2 p2(m) / m`.
pub fn maxwell_times(m: ModulusM) -> Result<MaxwellTimes> {
    let p1 = roots::p1(m)?.value;
    let p2 = roots::p2(m)?.value;
    let mv = m.get();
    Ok(MaxwellTimes {
        m: mv,
        t1: 2.0 * p1 / mv,
        t2: 2.0 * p2 / mv,
    })
}

/// A parameter at which a root is known in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactPoint {
    pub k: u32,
    pub m: f64,
    pub p: f64,
}

/// `p1 = pi m / |1 - m|` at `m = k/(k+2)` and `m = (k+2)/k`.
pub fn exact_points_p1(k_max: u32) -> Vec<ExactPoint> {
    let mut out = Vec::new();
    for k in 1..=k_max {
        let kf = f64::from(k);
        out.push(ExactPoint { k, m: kf / (kf + 2.0), p: PI * kf / 2.0 });
        out.push(ExactPoint { k, m: (kf + 2.0) / kf, p: PI * (kf + 2.0) / 2.0 });
    }
    out
}

/// `p2 = pi m / |1 - m|` at `m = k/(k+1)` and `m = (k+1)/k`.
pub fn exact_points_p2(k_max: u32) -> Vec<ExactPoint> {
    let mut out = Vec::new();
    for k in 1..=k_max {
        let kf = f64::from(k);
        out.push(ExactPoint { k, m: kf / (kf + 1.0), p: PI * kf });
        out.push(ExactPoint { k, m: (kf + 1.0) / kf, p: PI * (kf + 1.0) });
    }
    out
}

/// A point where the plots of `p1` and `p2` meet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingPoint {
    pub k: u32,
    /// Open enclosure from the theorem; equal endpoints for the exact crossings.
    pub enclosure: (f64, f64),
    pub m_bar: f64,
    pub p_at_crossing: f64,
    /// `|p1(m_bar) - p2(m_bar)|` with both roots recomputed independently.
    pub residual: f64,
    pub trivial: bool,
}

/// Lower end of the `k`-th crossing enclosure below 1.
pub fn crossing_lower(k: u32) -> f64 {
    let k = f64::from(k);
    (1.0 + 2.0 * k) / (3.0 + 2.0 * k) - 2.0 / (15.0 + 40.0 * k + 32.0 * k * k + 8.0 * k.powi(3))
}

/// Upper end of the `k`-th crossing enclosure below 1.
pub fn crossing_upper(k: u32) -> f64 {
    let k = f64::from(k);
    (1.0 + 2.0 * k) / (3.0 + 2.0 * k)
}

/// The `k`-th crossing enclosure above 1.
pub fn crossing_enclosure_above(k: u32) -> (f64, f64) {
    let kf = f64::from(k);
    let lo = (3.0 + 2.0 * kf) / (1.0 + 2.0 * kf);
    (lo, lo + 2.0 / (1.0 + 8.0 * kf * (1.0 + kf * kf)))
}

fn residual_at(m: f64) -> Result<f64> {
    let m = ModulusM::new(m)?;
    Ok((roots::p1(m)?.value - roots::p2(m)?.value).abs())
}

/// `g2tilde(x1(s), s)`: vanishes exactly where `x1 = x2`, and unlike
/// `p1 - p2` it is smooth there.
fn crossing_function(s: f64) -> Result<f64> {
    let x = roots::x1(SParam::new(s)?)?.value;
    Ok(eval_g2tilde(x, s))
}

fn nontrivial_crossing(k: u32) -> Result<(CrossingPoint, CrossingPoint)> {
    let (lo, hi) = (crossing_lower(k), crossing_upper(k));
    let fail = || Error::EnclosureFailure { k, lo, hi };
    let (s_lo, s_hi) = (roots::s_of(lo), roots::s_of(hi));

    // the inequalities of the crossing theorem hold on the closed ends
    let d_lo = {
        let m = ModulusM::new(lo)?;
        roots::p1(m)?.value - roots::p2(m)?.value
    };
    let d_hi = {
        let m = ModulusM::new(hi)?;
        roots::p1(m)?.value - roots::p2(m)?.value
    };
    if !(d_lo > 0.0 && d_hi < 0.0) {
        return Err(fail());
    }

    // x1 is smooth and away from pi on the open enclosure
    let inner = (s_lo + 1e-12 * s_lo, s_hi - 1e-9 * s_hi);
    let f = |s: f64| crossing_function(s).unwrap_or(f64::NAN);
    let (f_a, f_b) = (f(inner.0), f(inner.1));
    if !(f_a * f_b < 0.0) {
        return Err(fail());
    }
    let b = Bracket::new(inner.0, inner.1, "T3.c")?.with_zero_tol(g2tilde_noise(PI, s_hi));
    let s_bar = refine_root(f, &b, 1e-13)?.value;
    let m_bar = roots::m_of(s_bar);
    if !(lo < m_bar && m_bar < hi) {
        return Err(fail());
    }
    let x_bar = roots::x1(SParam::new(s_bar)?)?.value;
    let p_bar = x_bar * (s_bar - 1.0) / 2.0;
    let below = CrossingPoint {
        k,
        enclosure: (lo, hi),
        m_bar,
        p_at_crossing: p_bar,
        residual: residual_at(m_bar)?,
        trivial: false,
    };

    let (alo, ahi) = crossing_enclosure_above(k);
    let m_above = 1.0 / m_bar;
    if !(alo < m_above && m_above < ahi) {
        return Err(Error::EnclosureFailure { k, lo: alo, hi: ahi });
    }
    let above = CrossingPoint {
        k,
        enclosure: (alo, ahi),
        m_bar: m_above,
        p_at_crossing: p_bar / m_bar,
        residual: residual_at(m_above)?,
        trivial: false,
    };
    Ok((below, above))
}

fn trivial_crossing(k: u32, m: f64, p_exact: f64) -> Result<CrossingPoint> {
    let mm = ModulusM::new(m)?;
    let (a, b) = (roots::p1(mm)?.value, roots::p2(mm)?.value);
    Ok(CrossingPoint {
        k,
        enclosure: (m, m),
        m_bar: m,
        p_at_crossing: p_exact,
        residual: (a - b).abs(),
        trivial: true,
    })
}

/// All crossings for `k = 1..=k_max`, sorted by `m`: the exact ones at
/// `k/(k+1)` and `(k+1)/k`, and one nontrivial crossing inside each
/// enclosure on either side of 1.
pub fn find_crossings(k_max: u32) -> Result<Vec<CrossingPoint>> {
    if k_max == 0 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    let per_k: Vec<Result<Vec<CrossingPoint>>> = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let kf = f64::from(k);
            let (below, above) = nontrivial_crossing(k)?;
            Ok(vec![
                trivial_crossing(k, kf / (kf + 1.0), PI * kf)?,
                below,
                trivial_crossing(k, (kf + 1.0) / kf, PI * (kf + 1.0))?,
                above,
            ])
        })
        .collect();
    let mut out = Vec::new();
    for r in per_k {
        out.extend(r?);
    }
    out.sort_by(|a, b| a.m_bar.total_cmp(&b.m_bar));
    Ok(out)
}

/// `p1'(m) = -(dg1/dm) / (dg1/dp)` at `p = p1(m)`.
pub fn p1_derivative(m: ModulusM) -> Result<f64> {
    let p = roots::p1(m)?.value;
    let mv = m.get();
    let gp = dg1_dp(p, mv);
    if gp.abs() < TANGENT_TOL {
        return Err(Error::DegenerateDerivative { m: mv, dg_dp: gp });
    }
    Ok(-dg1_dm(p, mv) / gp)
}

/// Whether `p1` has a vertical tangent at `m_star`: `dg1/dp` vanishes at
/// `(p1(m_star), m_star)` while `dg1/dm` does not.
pub fn vertical_tangent_check(m_star: ModulusM) -> Result<bool> {
    let p = roots::p1(m_star)?.value;
    let m = m_star.get();
    Ok(dg1_dp(p, m).abs() < TANGENT_TOL && dg1_dm(p, m).abs() > TANGENT_TOL)
}

/// Closed form `x2'(2k+1) = -pi / (4k + 2)`.
pub fn x2_derivative_at_odd(k: u32) -> f64 {
    -PI / (4.0 * f64::from(k) + 2.0)
}

/// `-(dg2tilde/ds) / (dg2tilde/dx)` at `(pi, 2k+1)`.
pub fn x2_derivative_implicit(k: u32) -> f64 {
    let s = 2.0 * f64::from(k) + 1.0;
    -dg2tilde_ds(PI, s) / dg2tilde_dx(PI, s)
}

/// Central difference of `x2` at `s` with step `1e-5 max(1, s)`.
pub fn x2_derivative_fd(s: f64) -> Result<f64> {
    let h = 1e-5 * s.max(1.0);
    let a = roots::x2(SParam::new(s + h)?)?.value;
    let b = roots::x2(SParam::new(s - h)?)?.value;
    Ok((a - b) / (2.0 * h))
}
