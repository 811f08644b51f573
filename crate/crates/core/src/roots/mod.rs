//! Theorem-certified brackets for the minimal positive roots and their
//! refinement, plus a brute-force scanning oracle.

pub mod bounds;
pub mod bracket;

use std::f64::consts::PI;

pub use bounds::{
    dist_to_integer, eval_a, eval_h1, eval_h2, hyperbola, m_of, near_integer, p1_bounds,
    p1_hyperbola_side, p2_bounds, p2_hyperbola_side, s_of, x1_bounds, x2_bounds,
    BoundCertificate,
};
pub use bracket::{
    changes_sign, oracle_min_root, refine_root, Bracket, RootResult, DEFAULT_TOL, EPS_BR,
};

use crate::error::{Error, Result};
use crate::special::{
    const_rho, eval_g1, eval_g2, eval_g2tilde, eval_gtilde, eval_h, g1_noise, g2_noise,
    g2tilde_noise, gtilde_noise, ModulusM, SParam, RHO2_PRINTED,
};

/// Start of every oracle scan; below it `g1 ~ p^3` and `g2 ~ p^6` are noise.
pub const ORACLE_PMIN: f64 = 1e-9;

fn with_noise(b: Bracket, noise: impl Fn(f64) -> f64) -> Bracket {
    let z = match b.exact {
        Some(e) => noise(e),
        None => noise(b.lo).max(noise(b.hi)),
    };
    b.with_zero_tol(z)
}

/// Snap to the exact root `e` when it is numerically a root of `f`.
fn exact_if_root(
    e: f64,
    clause: &str,
    f: impl Fn(f64) -> f64,
    noise: impl Fn(f64) -> f64,
) -> Option<Bracket> {
    (f(e).abs() <= noise(e)).then(|| Bracket::degenerate(e, clause).with_zero_tol(noise(e)))
}

fn bracket_p1_unit(m: f64) -> Result<Bracket> {
    let f = |p| eval_g1(p, m);
    let noise = |p| g1_noise(p, m);
    let hyp = hyperbola(m);
    let s = s_of(m);
    if s >= 2.0 - 1e-9 {
        if let Some(n) = near_integer(s) {
            let clause = if n % 2 == 1 { "T1.b" } else { "T1.a" };
            if let Some(b) = exact_if_root(hyp, clause, f, noise) {
                return Ok(b);
            }
        }
    }
    if m < 1.0 / 3.0 {
        let b = Bracket::new((const_rho() * m).max(hyp), 1.5 * PI * m, "T1.e")?;
        return Ok(with_noise(b, noise));
    }
    let scale = PI * m / (1.0 + m);
    let b = if s - 2.0 * (s / 2.0).floor() < 1.0 {
        Bracket::new(hyp - scale * eval_h1(m)?, hyp, "T1.c+d")
    } else {
        Bracket::new(hyp, hyp + scale * eval_h2(m)?, "T1.c+d")
    };
    // a vanishing correction width collapses the band onto the hyperbola
    let b = b.or_else(|_| Bracket::new(hyp * (1.0 - 1e-15), hyp * (1.0 + 1e-15), "T1.c+d"))?;
    Ok(with_noise(b, noise))
}

/// The bracket for `p1(m)` from clauses c)-e) of the first theorem, degenerate
/// at the exact-value parameters, reflected through `p1(m) = m p1(1/m)` for
/// `m > 1`.
pub fn bracket_p1(m: ModulusM) -> Result<Bracket> {
    let m = m.get();
    if m < 1.0 {
        bracket_p1_unit(m)
    } else {
        let b = bracket_p1_unit(1.0 / m)?.scaled(m);
        Ok(with_noise(b, |p| g1_noise(p, m)))
    }
}

fn bracket_p2_unit(m: f64) -> Result<Bracket> {
    let f = |p| eval_g2(p, m);
    let noise = |p| g2_noise(p, m);
    if m < 0.5 {
        let b = Bracket::new(RHO2_PRINTED * m, 2.0 * PI * m, "T2.c")?;
        return Ok(with_noise(b, noise));
    }
    let hyp = hyperbola(m);
    let s = s_of(m);
    if let Some(n) = near_integer(s) {
        if n % 2 == 1 {
            if let Some(b) = exact_if_root(hyp, "T2.a", f, noise) {
                return Ok(b);
            }
        }
    }
    let lower = hyp - m / (1.0 - m) * ((1.0 - m) / (1.0 + m)).asin();
    let upper = hyp + m / (3.0 * m - 1.0);
    let b = match p2_hyperbola_side(m) {
        Some(-1) => Bracket::new(lower, hyp, "T2.d")?,
        Some(_) => Bracket::new(hyp, upper, "T2.d")?,
        None => Bracket::new(lower, upper, "T2.c")?,
    };
    Ok(with_noise(b, noise))
}

/// The bracket for `p2(m)` from clauses c)-d) of the second theorem.
pub fn bracket_p2(m: ModulusM) -> Result<Bracket> {
    let m = m.get();
    if m < 1.0 {
        bracket_p2_unit(m)
    } else {
        let b = bracket_p2_unit(1.0 / m)?.scaled(m);
        Ok(with_noise(b, |p| g2_noise(p, m)))
    }
}

/// The bracket for `x1(s)`.
pub fn bracket_x1(s: SParam) -> Result<Bracket> {
    let s = s.get();
    let noise = |x| gtilde_noise(x, s);
    if s >= 2.0 - 1e-9 && near_integer(s).is_some() {
        if let Some(b) = exact_if_root(PI, "P.g1_1", |x| eval_gtilde(x, s), noise) {
            return Ok(b);
        }
    }
    let c = x1_bounds(s)?;
    Ok(with_noise(Bracket::new(c.lower, c.upper, c.clause)?, noise))
}

/// The bracket for `x2(s)`, sharpened by the side information of
/// clause d) of the second theorem when `s >= 3`.
pub fn bracket_x2(s: SParam) -> Result<Bracket> {
    let s = s.get();
    let noise = |x| g2tilde_noise(x, s);
    if s < 3.0 {
        let c = x2_bounds(s)?;
        return Ok(with_noise(Bracket::new(c.lower, c.upper, c.clause)?, noise));
    }
    if let Some(n) = near_integer(s) {
        if n % 2 == 1 {
            if let Some(b) = exact_if_root(PI, "R.g2_1", |x| eval_g2tilde(x, s), noise) {
                return Ok(b);
            }
        }
    }
    let c = x2_bounds(s)?;
    let b = match p2_hyperbola_side(m_of(s)) {
        Some(-1) => Bracket::new(c.lower, PI, "P.g2_3")?,
        Some(_) => Bracket::new(PI, c.upper, "P.g2_3")?,
        None => Bracket::new(c.lower, c.upper, c.clause)?,
    };
    Ok(with_noise(b, noise))
}

/// Upper end of the oracle scan for `p1` or `p2` at `m`.
fn oracle_window(m: f64, x_max: f64) -> f64 {
    x_max * m / (1.0 - m).abs() * (1.0 + 1e-6) + 1e-6
}

fn oracle_step(m: f64) -> f64 {
    PI * m.min(1.0) / 64.0
}

/// `p1(m)` by scanning from [`ORACLE_PMIN`], independent of the theorems.
pub fn oracle_p1(m: ModulusM) -> Result<RootResult> {
    let m = m.get();
    oracle_min_root(
        |p| eval_g1(p, m),
        |p| g1_noise(p, m),
        ORACLE_PMIN,
        oracle_window(m, 1.5 * PI).max(1.5 * PI * m.min(1.0)),
        oracle_step(m),
    )
}

/// `p2(m)` by scanning from [`ORACLE_PMIN`], independent of the theorems.
pub fn oracle_p2(m: ModulusM) -> Result<RootResult> {
    let m = m.get();
    oracle_min_root(
        |p| eval_g2(p, m),
        |p| g2_noise(p, m),
        ORACLE_PMIN,
        oracle_window(m, 2.0 * PI).max(2.0 * PI * m.min(1.0)),
        oracle_step(m),
    )
}

fn refine_or_scan(
    b: Result<Bracket>,
    f: impl Fn(f64) -> f64 + Copy,
    tol: f64,
    oracle: impl FnOnce() -> Result<RootResult>,
) -> Result<RootResult> {
    let b = b?;
    if b.is_certified(f) {
        return refine_root(f, &b, tol);
    }
    match oracle() {
        Ok(r) => Ok(r),
        Err(_) => Err(Error::NoSignChange {
            lo: b.lo,
            hi: b.hi,
            f_lo: f(b.lo),
            f_hi: f(b.hi),
            clause: b.clause,
        }),
    }
}

/// `p1(m) = min{p > 0 : g1(p, m) = 0}` to absolute tolerance `tol`.
pub fn p1_with_tol(m: ModulusM, tol: f64) -> Result<RootResult> {
    let mv = m.get();
    refine_or_scan(bracket_p1(m), move |p| eval_g1(p, mv), tol, || oracle_p1(m))
}

/// `p2(m) = min{p > 0 : g2(p, m) = 0}` to absolute tolerance `tol`.
pub fn p2_with_tol(m: ModulusM, tol: f64) -> Result<RootResult> {
    let mv = m.get();
    refine_or_scan(bracket_p2(m), move |p| eval_g2(p, mv), tol, || oracle_p2(m))
}

pub fn p1(m: ModulusM) -> Result<RootResult> {
    p1_with_tol(m, DEFAULT_TOL)
}

pub fn p2(m: ModulusM) -> Result<RootResult> {
    p2_with_tol(m, DEFAULT_TOL)
}

/// `x1(s)`, the minimal positive root of `gtilde(., s)`.
pub fn x1(s: SParam) -> Result<RootResult> {
    x1_with_tol(s, DEFAULT_TOL)
}

pub fn x1_with_tol(s: SParam, tol: f64) -> Result<RootResult> {
    let sv = s.get();
    let f = move |x| eval_gtilde(x, sv);
    refine_or_scan(bracket_x1(s), f, tol, || oracle_x1(s))
}

/// `x1(s)` by scanning from [`ORACLE_PMIN`].
pub fn oracle_x1(s: SParam) -> Result<RootResult> {
    let sv = s.get();
    oracle_min_root(
        |x| eval_gtilde(x, sv),
        |x| gtilde_noise(x, sv),
        ORACLE_PMIN,
        1.5 * PI,
        PI / (64.0 * sv),
    )
}

/// `x2(s)`, the minimal positive root of `g2tilde(., s)`.
pub fn x2(s: SParam) -> Result<RootResult> {
    x2_with_tol(s, DEFAULT_TOL)
}

pub fn x2_with_tol(s: SParam, tol: f64) -> Result<RootResult> {
    let sv = s.get();
    let f = move |x| eval_g2tilde(x, sv);
    refine_or_scan(bracket_x2(s), f, tol, || oracle_x2(s))
}

/// `x2(s)` by scanning from [`ORACLE_PMIN`].
pub fn oracle_x2(s: SParam) -> Result<RootResult> {
    let sv = s.get();
    oracle_min_root(
        |x| eval_g2tilde(x, sv),
        |x| g2tilde_noise(x, sv),
        ORACLE_PMIN,
        2.0 * PI,
        PI / (64.0 * sv),
    )
}

/// The first two positive roots of `h(., s) = s sin x + sin(s x)` for `s >= 3`.
pub fn x_roots_of_h(s: SParam) -> Result<(f64, f64)> {
    let s = s.get();
    if s < 3.0 {
        return Err(Error::Domain(format!("roots of h need s >= 3, got {s}")));
    }
    if near_integer(s).is_some() && eval_h(PI, s).abs() <= gtilde_noise(PI, s) {
        return Ok((PI, 2.0 * PI));
    }
    let f = |x| eval_h(x, s);
    let noise = |x| gtilde_noise(x, s);
    let w = (1.0 / s).asin();
    let first = if (s.floor() as u64) % 2 == 1 {
        Bracket::new(PI - w, PI, "stat.g2_1")?
    } else {
        Bracket::new(PI, PI + w, "stat.g2_1")?
    };
    let x1 = refine_root(f, &with_noise(first, noise), DEFAULT_TOL)?.value;
    let x2 = oracle_min_root(f, noise, 2.0 * PI - w, 2.0 * PI + w, 2.0 * w / 256.0)?.value;
    Ok((x1, x2))
}
