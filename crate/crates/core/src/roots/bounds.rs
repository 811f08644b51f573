//! Two-sided estimates for `p1`, `p2`, `x1`, `x2` exactly as stated in the
//! theorems, with no numerical sharpening.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{const_rho, RHO2_PRINTED};

/// Relative distance to an integer below which `s` counts as an integer.
pub const INTEGER_S_TOL: f64 = 1e-9;

/// A theorem-given enclosure `lower < root < upper` at a fixed parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub m: f64,
    pub lower: f64,
    pub upper: f64,
    pub clause: String,
}

impl BoundCertificate {
    fn new(m: f64, lower: f64, upper: f64, clause: &str) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || lower >= upper {
            return Err(Error::Domain(format!(
                "empty estimate ({lower}, {upper}) from clause {clause} at m = {m}"
            )));
        }
        Ok(Self {
            m,
            lower,
            upper,
            clause: clause.to_string(),
        })
    }

    fn scaled(self, m: f64, factor: f64) -> Self {
        Self {
            m,
            lower: self.lower * factor,
            upper: self.upper * factor,
            clause: self.clause,
        }
    }
}

/// `s = (1 + m) / (1 - m)` without the newtype checks.
#[inline]
pub fn s_of(m: f64) -> f64 {
    (1.0 + m) / (1.0 - m)
}

/// `m = (s - 1) / (s + 1)` without the newtype checks.
#[inline]
pub fn m_of(s: f64) -> f64 {
    (s - 1.0) / (s + 1.0)
}

/// The hyperbola `pi m / |1 - m|` that `p1` and `p2` wrap around.
#[inline]
pub fn hyperbola(m: f64) -> f64 {
    PI * m / (1.0 - m).abs()
}

/// `Some(n)` when `s` lies within [`INTEGER_S_TOL`] (relative) of the integer `n`.
pub fn near_integer(s: f64) -> Option<u64> {
    let n = s.round();
    ((s - n).abs() <= INTEGER_S_TOL * s.abs().max(1.0) && n >= 1.0).then_some(n as u64)
}

fn check_unit_m(m: f64) -> Result<()> {
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::Domain(format!("expected m in (0, 1), got {m}")));
    }
    Ok(())
}

/// Correction width on the `s in [2k, 2k+1]` bands (`m` between
/// `(2k-1)/(2k+1)` and `k/(k+1)`).
///
/// At the band endpoints the cube-root radicand vanishes and the value is the
/// limit 0.
pub fn eval_h1(m: f64) -> Result<f64> {
    check_unit_m(m)?;
    let s = s_of(m);
    let k = (s / 2.0).floor();
    if s < 2.0 || s - 2.0 * k > 1.0 {
        return Err(Error::Domain(format!(
            "h1 is defined for s in [2k, 2k+1]; m = {m} gives s = {s}"
        )));
    }
    Ok((s / 2.0 - k)
        .min((2.0 * k + 1.0 - s).max(0.0).cbrt())
        .min(s / PI * (1.0 / s).asin()))
}

/// Correction width on the `s in [2k+1, 2k+2]` bands.
pub fn eval_h2(m: f64) -> Result<f64> {
    check_unit_m(m)?;
    let s = s_of(m);
    let k = ((s - 1.0) / 2.0).floor();
    if s < 3.0 || s - 2.0 * k - 1.0 > 1.0 {
        return Err(Error::Domain(format!(
            "h2 is defined for s in [2k+1, 2k+2]; m = {m} gives s = {s}"
        )));
    }
    Ok((s - 2.0 * k - 1.0)
        .max(0.0)
        .cbrt()
        .min(k + 1.0 - s / 2.0)
        .min(s / PI * (1.0 / s).asin()))
}

/// Distance from `z` to the nearest integer.
#[inline]
pub fn dist_to_integer(z: f64) -> f64 {
    (z - z.round()).abs()
}

/// The sharpened half-width `a(s)` around `pi` for `x1(s)`, `s >= 2`.
pub fn eval_a(s: f64) -> Result<f64> {
    if !(s >= 2.0) || !s.is_finite() {
        return Err(Error::Domain(format!("a(s) needs s >= 2, got {s}")));
    }
    let r = dist_to_integer(s / 2.0);
    let asin = (1.0 / s).asin();
    Ok(if r < 7.0 / 16.0 {
        (PI / s * r).min(asin)
    } else {
        (PI / s * (1.0 - 2.0 * r).max(0.0).cbrt()).min(asin)
    })
}

fn p1_bounds_unit(m: f64) -> Result<BoundCertificate> {
    let hyp = hyperbola(m);
    if m < 1.0 / 3.0 {
        return BoundCertificate::new(m, (const_rho() * m).max(hyp), 1.5 * PI * m, "T1.e");
    }
    let s = s_of(m);
    let scale = PI * m / (1.0 + m);
    if near_integer(s).is_some() {
        // closed bands degenerate here; use the arcsin enclosure of x1
        let w = (1.0 / s).asin() * m / (1.0 - m);
        return BoundCertificate::new(m, hyp - w, hyp + w, "E.p1_general");
    }
    if s - 2.0 * (s / 2.0).floor() < 1.0 {
        BoundCertificate::new(m, hyp - scale * eval_h1(m)?, hyp, "T1.d")
    } else {
        BoundCertificate::new(m, hyp, hyp + scale * eval_h2(m)?, "T1.d")
    }
}

/// The enclosure of `p1(m)` from the first theorem, clauses c)-e).
///
/// For `m > 1` the stated bounds are the images of the `1/m` bounds under
/// `p1(m) = m p1(1/m)`.
pub fn p1_bounds(m: f64) -> Result<BoundCertificate> {
    if !(m > 0.0) || m == 1.0 || !m.is_finite() {
        return Err(Error::Domain(format!("p1 bounds need m > 0, m != 1, got {m}")));
    }
    if m < 1.0 {
        p1_bounds_unit(m)
    } else {
        Ok(p1_bounds_unit(1.0 / m)?.scaled(m, m))
    }
}

fn p2_bounds_unit(m: f64) -> Result<BoundCertificate> {
    if m < 0.5 {
        return BoundCertificate::new(m, RHO2_PRINTED * m, 2.0 * PI * m, "T2.c");
    }
    let hyp = hyperbola(m);
    let lower = hyp - m / (1.0 - m) * ((1.0 - m) / (1.0 + m)).asin();
    let upper = hyp + m / (3.0 * m - 1.0);
    BoundCertificate::new(m, lower, upper, "T2.c")
}

/// The enclosure of `p2(m)` from the second theorem, clause c).
pub fn p2_bounds(m: f64) -> Result<BoundCertificate> {
    if !(m > 0.0) || m == 1.0 || !m.is_finite() {
        return Err(Error::Domain(format!("p2 bounds need m > 0, m != 1, got {m}")));
    }
    if m < 1.0 {
        p2_bounds_unit(m)
    } else {
        Ok(p2_bounds_unit(1.0 / m)?.scaled(m, m))
    }
}

/// Which side of the hyperbola clause d) of the second theorem puts `p2(m)`
/// on: `Some(-1)` below, `Some(1)` above, `None` where it is silent.
pub fn p2_hyperbola_side(m: f64) -> Option<i8> {
    if !(m > 0.0) || m == 1.0 {
        return None;
    }
    let mu = if m < 1.0 { m } else { 1.0 / m };
    if mu <= 0.5 {
        return None;
    }
    let s = s_of(mu);
    let k = ((s - 1.0) / 2.0).floor();
    let t = s - (2.0 * k + 1.0);
    if t > 0.0 && t <= 1.0 - 1.0 / (2.0 * k + 2.0) {
        Some(-1)
    } else if t >= 1.0 {
        Some(1)
    } else {
        None
    }
}

/// Which side of the hyperbola clause c) of the first theorem puts `p1(m)`
/// on, for `m` in `(1/3, 1)` or `(1, 3)`.
pub fn p1_hyperbola_side(m: f64) -> Option<i8> {
    if !(m > 0.0) || m == 1.0 {
        return None;
    }
    let mu = if m < 1.0 { m } else { 1.0 / m };
    if mu <= 1.0 / 3.0 {
        return None;
    }
    let s = s_of(mu);
    if near_integer(s).is_some() {
        return None;
    }
    Some(if s - 2.0 * (s / 2.0).floor() < 1.0 { -1 } else { 1 })
}

/// The enclosure of `x1(s)`: clause e) of the first theorem in the `x` chart
/// for `s < 2`, the `a(s)` bands for `s >= 2`.
pub fn x1_bounds(s: f64) -> Result<BoundCertificate> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain(format!("x1 bounds need s > 1, got {s}")));
    }
    let m = m_of(s);
    if s < 2.0 {
        let lower = (2.0 * const_rho() / (s + 1.0)).max(PI);
        return BoundCertificate::new(m, lower, 3.0 * PI / (s + 1.0), "T1.e");
    }
    if near_integer(s).is_some() {
        let w = (1.0 / s).asin();
        return BoundCertificate::new(m, PI - w, PI + w, "E.p1_general");
    }
    let a = eval_a(s)?;
    if s - 2.0 * (s / 2.0).floor() < 1.0 {
        BoundCertificate::new(m, PI - a, PI, "P.g1_2")
    } else {
        BoundCertificate::new(m, PI, PI + a, "P.g1_2")
    }
}

/// The enclosure of `x2(s)`: `(pi - arcsin(1/s), pi + 1/(s-2))` for `s >= 3`,
/// the `x`-chart image of the `m < 1/2` estimate below.
pub fn x2_bounds(s: f64) -> Result<BoundCertificate> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain(format!("x2 bounds need s > 1, got {s}")));
    }
    let m = m_of(s);
    if s < 3.0 {
        let w = 2.0 / (s + 1.0);
        return BoundCertificate::new(m, RHO2_PRINTED * w, 2.0 * PI * w, "T2.c");
    }
    BoundCertificate::new(m, PI - (1.0 / s).asin(), PI + 1.0 / (s - 2.0), "P.g2_2")
}
