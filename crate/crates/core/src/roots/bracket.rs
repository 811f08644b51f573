use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute tolerance on the root variable.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Half-width of the fallback bracket around a known exact root.
pub const EPS_BR: f64 = 1e-6;

/// Largest offset tried when probing for a sign change around a root.
const MAX_PROBE: f64 = 1e-3;

/// A sign-change interval for a scalar function, tagged with the clause that
/// certified it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub clause: String,
    /// Values with `|f| <= zero_tol` are numerically indistinguishable from 0.
    #[serde(default)]
    pub zero_tol: f64,
    /// Known exact root inside a degenerate bracket.
    #[serde(default)]
    pub exact: Option<f64>,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64, clause: impl Into<String>) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::Domain(format!("invalid bracket [{lo}, {hi}]")));
        }
        Ok(Self {
            lo,
            hi,
            clause: clause.into(),
            zero_tol: 0.0,
            exact: None,
        })
    }

    /// The `eps_br` fallback around an exact root at a special parameter.
    pub fn degenerate(center: f64, clause: impl Into<String>) -> Self {
        let half = EPS_BR * center.abs().max(1.0);
        Self {
            lo: center - half,
            hi: center + half,
            clause: clause.into(),
            zero_tol: 0.0,
            exact: Some(center),
        }
    }

    pub fn with_zero_tol(mut self, zero_tol: f64) -> Self {
        self.zero_tol = zero_tol;
        self
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Multiply both endpoints (and the exact root) by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            lo: self.lo * factor,
            hi: self.hi * factor,
            clause: self.clause.clone(),
            zero_tol: self.zero_tol,
            exact: self.exact.map(|e| e * factor),
        }
    }

    /// Whether `f` certifies this bracket: opposite endpoint signs, or an
    /// endpoint (or the exact root) that is numerically zero.
    pub fn is_certified(&self, f: impl Fn(f64) -> f64) -> bool {
        if let Some(e) = self.exact {
            return f(e).abs() <= self.zero_tol;
        }
        let (fl, fh) = (f(self.lo), f(self.hi));
        fl * fh <= 0.0 || fl.abs() <= self.zero_tol || fh.abs() <= self.zero_tol
    }
}

/// A refined root together with the bracket that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootResult {
    pub value: f64,
    pub residual: f64,
    pub bracket: Bracket,
    pub iterations: u32,
    pub changed_sign: bool,
}

/// Sign test around `x`: probe `x -/+ d` for growing `d` until both values
/// clear `zero_tol`, then compare signs.
pub fn changes_sign(f: impl Fn(f64) -> f64, x: f64, tol: f64, zero_tol: f64) -> bool {
    let mut d = (10.0 * tol).max(8.0 * f64::EPSILON * x.abs().max(1.0));
    while d <= MAX_PROBE * x.abs().max(1.0) {
        let (a, b) = (f(x - d), f(x + d));
        if a.abs() > zero_tol && b.abs() > zero_tol {
            return (a < 0.0) != (b < 0.0);
        }
        d *= 10.0;
    }
    false
}

/// Bisection on a certified bracket down to absolute width `tol`.
///
/// Degenerate brackets carrying an exact root are verified by residual and
/// returned as is.
pub fn refine_root(f: impl Fn(f64) -> f64, b: &Bracket, tol: f64) -> Result<RootResult> {
    let finish = |value: f64, iterations: u32| RootResult {
        value,
        residual: f(value).abs(),
        bracket: b.clone(),
        iterations,
        changed_sign: changes_sign(&f, value, tol, b.zero_tol),
    };

    if let Some(e) = b.exact {
        let r = f(e);
        if r.abs() <= b.zero_tol {
            return Ok(finish(e, 0));
        }
        return Err(Error::NoSignChange {
            lo: e,
            hi: e,
            f_lo: r,
            f_hi: r,
            clause: b.clause.clone(),
        });
    }

    let (mut lo, mut hi) = (b.lo, b.hi);
    let (mut f_lo, f_hi) = (f(lo), f(hi));
    if f_lo * f_hi > 0.0 || f_lo == 0.0 || f_hi == 0.0 {
        let (al, ah) = (f_lo.abs(), f_hi.abs());
        if al.min(ah) <= b.zero_tol {
            return Ok(finish(if al <= ah { lo } else { hi }, 0));
        }
        return Err(Error::NoSignChange {
            lo,
            hi,
            f_lo,
            f_hi,
            clause: b.clause.clone(),
        });
    }

    let mut iterations = 0;
    while hi - lo > tol && iterations < 2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(finish(mid, iterations));
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok(finish(plateau_center(&f, x, b.zero_tol, b.lo, b.hi), iterations))
}

/// Midpoint of the interval around `x` on which `|f| <= zero_tol`.
///
/// At a root of odd multiplicity the sign of `f` is noise across this whole
/// interval, so bisection alone stops anywhere inside it; the midpoint is
/// accurate to the asymmetry of `f` instead.
fn plateau_center(f: &impl Fn(f64) -> f64, x: f64, zero_tol: f64, lo: f64, hi: f64) -> f64 {
    if zero_tol <= 0.0 || f(x).abs() > zero_tol {
        return x;
    }
    let edge = |dir: f64| -> Option<f64> {
        let limit = if dir < 0.0 { x - lo } else { hi - x };
        let mut inside = 0.0;
        let mut d = 4.0 * f64::EPSILON * x.abs().max(1.0);
        loop {
            if d > limit {
                return None;
            }
            if f(x + dir * d).abs() > zero_tol {
                break;
            }
            inside = d;
            d *= 2.0;
        }
        let mut outside = d;
        for _ in 0..60 {
            let mid = 0.5 * (inside + outside);
            if mid <= inside || mid >= outside {
                break;
            }
            if f(x + dir * mid).abs() > zero_tol {
                outside = mid;
            } else {
                inside = mid;
            }
        }
        Some(0.5 * (inside + outside))
    };
    match (edge(-1.0), edge(1.0)) {
        (Some(l), Some(r)) => x + 0.5 * (r - l),
        _ => x,
    }
}

/// Brute-force minimal root: scan `[pmin, pmax]` with `step` for the first
/// sign change among samples that clear `noise`, rescan that cell a hundred
/// times finer, then bisect.
pub fn oracle_min_root(
    f: impl Fn(f64) -> f64,
    noise: impl Fn(f64) -> f64,
    pmin: f64,
    pmax: f64,
    step: f64,
) -> Result<RootResult> {
    if !(pmin > 0.0 && pmax > pmin && step > 0.0) {
        return Err(Error::Domain(format!(
            "oracle needs 0 < pmin < pmax and step > 0, got ({pmin}, {pmax}, {step})"
        )));
    }
    let (lo, hi) = first_sign_cell(&f, &noise, pmin, pmax, step)
        .ok_or(Error::NoRootFound { lo: pmin, hi: pmax })?;
    let (lo, hi) = first_sign_cell(&f, &noise, lo, hi, (hi - lo) / 100.0).unwrap_or((lo, hi));
    let zero_tol = noise(lo).max(noise(hi));
    let b = Bracket::new(lo, hi, "oracle")?.with_zero_tol(zero_tol);
    refine_root(f, &b, 0.0)
}

fn first_sign_cell(
    f: &impl Fn(f64) -> f64,
    noise: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    step: f64,
) -> Option<(f64, f64)> {
    let n = ((hi - lo) / step).ceil() as u64;
    let mut prev: Option<(f64, bool)> = None;
    for i in 0..=n {
        let x = if i == n { hi } else { lo + i as f64 * step };
        let v = f(x);
        if v.abs() <= noise(x) {
            continue;
        }
        let neg = v < 0.0;
        if let Some((px, pneg)) = prev {
            if pneg != neg {
                return Some((px, x));
            }
        }
        prev = Some((x, neg));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn bracket_rejects_inverted() {
        assert!(Bracket::new(1.0, 1.0, "t").is_err());
        assert!(Bracket::new(2.0, 1.0, "t").is_err());
        assert!(Bracket::new(f64::NAN, 1.0, "t").is_err());
    }

    #[test]
    fn bisection_finds_pi() {
        let b = Bracket::new(3.0, 3.3, "user").unwrap();
        let r = refine_root(|x| 2.0 * x.sin() - x.sin() * x.cos(), &b, 1e-12).unwrap();
        assert!((r.value - PI).abs() < 1e-12);
        // triple root: the computed sign is noise within ~1e-5 of pi
        let b = b.with_zero_tol(1e-14);
        let r = refine_root(|x| 3.0 * x.sin() - (3.0 * x).sin(), &b, 1e-12).unwrap();
        assert!((r.value - PI).abs() < 1e-7, "{}", r.value - PI);
        assert!(b.contains(r.value));
    }

    #[test]
    fn simple_root_changes_sign() {
        let b = Bracket::new(1.0, 2.0, "user").unwrap();
        let r = refine_root(|x| x * x - 2.0, &b, 1e-13).unwrap();
        assert!((r.value - 2f64.sqrt()).abs() < 1e-12);
        assert!(r.changed_sign);
        assert!(r.iterations > 30);
    }

    #[test]
    fn double_root_does_not_change_sign() {
        assert!(!changes_sign(|x| (x - 1.0).powi(2), 1.0, 1e-12, 0.0));
        assert!(changes_sign(|x| (x - 1.0).powi(3), 1.0, 1e-12, 1e-15));
    }

    #[test]
    fn uncertified_bracket_errors() {
        let b = Bracket::new(0.1, 0.2, "user").unwrap();
        let err = refine_root(|x| x + 1.0, &b, 1e-12).unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }));
    }

    #[test]
    fn degenerate_bracket_returns_exact_root() {
        let b = Bracket::degenerate(2.0, "exact").with_zero_tol(1e-14);
        let r = refine_root(|x| (x - 2.0).powi(3), &b, 1e-12).unwrap();
        assert_eq!(r.value, 2.0);
        assert!(r.changed_sign);
    }

    #[test]
    fn oracle_skips_noise_and_finds_first_root() {
        // x^3 (x - 1)(x - 2): the triple zero at 0 stays below the noise floor
        let f = |x: f64| x.powi(3) * (x - 1.0) * (x - 2.0);
        let r = oracle_min_root(f, |_| 1e-12, 1e-9, 3.0, 0.01).unwrap();
        assert!((r.value - 1.0).abs() < 1e-13);
        assert!(matches!(
            oracle_min_root(|x: f64| x + 1.0, |_| 0.0, 1e-9, 3.0, 0.01),
            Err(Error::NoRootFound { .. })
        ));
    }
}
