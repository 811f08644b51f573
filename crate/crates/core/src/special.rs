//! Closed-form evaluation of the transcendental functions that govern the
//! first Maxwell times, together with the `(p, m) <-> (x, s)` change of
//! chart.
//!
//! All evaluators take plain `f64` arguments and are total on their stated
//! domain. Construction of [`ModulusM`] enforces the `m > 0, m != 1`
//! restriction for the operations that need it (root finding, trajectories);
//! the raw evaluators accept `m = 1` so that the degeneracy `g1(p, 1) = 0`
//! can itself be checked.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-width of the excluded band around the degenerate line `m = 1`.
pub const EPS_SING: f64 = 1e-6;

/// `|sin x|` below this is treated as a pole of `x cot x`.
pub const POLE_TOL: f64 = 1e-12;

/// `|h(x, s)|` below this is treated as a vertical asymptote of `J`.
pub const ASYMPTOTE_TOL: f64 = 1e-12;

/// Offending denominators below this switch to a truncated series.
pub const SERIES_THRESHOLD: f64 = 1e-4;

/// Lower constant of the `m < 1/2` estimate for `p2` as it is printed in the
/// theorem statement. The sharp value is [`const_rho2`].
pub const RHO2_PRINTED: f64 = 5.7;

const EPS: f64 = f64::EPSILON;

/// The frequency ratio `m = sqrt(r)`, restricted to `m > 0`, `|m - 1| > eps`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ModulusM(f64);

impl ModulusM {
    pub fn new(m: f64) -> Result<Self> {
        Self::with_eps(m, EPS_SING)
    }

    /// Like [`ModulusM::new`] with a caller-chosen exclusion band around 1.
    pub fn with_eps(m: f64, eps_sing: f64) -> Result<Self> {
        if !m.is_finite() || m <= 0.0 {
            return Err(Error::Domain(format!("m must be positive and finite, got {m}")));
        }
        if (m - 1.0).abs() <= eps_sing {
            return Err(Error::Domain(format!(
                "m = {m} lies within {eps_sing:e} of the degenerate value m = 1"
            )));
        }
        Ok(Self(m))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_below_one(self) -> bool {
        self.0 < 1.0
    }

    /// `1/m`, the partner under the reflection `(p, m) -> (p/m, 1/m)`.
    pub fn reciprocal(self) -> Self {
        Self(1.0 / self.0)
    }
}

impl TryFrom<f64> for ModulusM {
    type Error = Error;

    fn try_from(m: f64) -> Result<Self> {
        Self::new(m)
    }
}

impl From<ModulusM> for f64 {
    fn from(m: ModulusM) -> f64 {
        m.0
    }
}

/// The Möbius image `s = (1 + m) / (1 - m)` of `m in (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SParam(f64);

impl SParam {
    pub fn new(s: f64) -> Result<Self> {
        if !s.is_finite() || s <= 1.0 {
            return Err(Error::Domain(format!("s must be finite and > 1, got {s}")));
        }
        Ok(Self(s))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for SParam {
    type Error = Error;

    fn try_from(s: f64) -> Result<Self> {
        Self::new(s)
    }
}

impl From<SParam> for f64 {
    fn from(s: SParam) -> f64 {
        s.0
    }
}

/// Rescaled root variable `x = p (1 - m) / m`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct XVar(f64);

impl XVar {
    pub fn new(x: f64) -> Result<Self> {
        if !x.is_finite() || x <= 0.0 {
            return Err(Error::Domain(format!("x must be positive and finite, got {x}")));
        }
        Ok(Self(x))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// `s = (1 + m) / (1 - m)`; only defined for `m in (0, 1)`.
pub fn m_to_s(m: ModulusM) -> Result<SParam> {
    let m = m.get();
    if m >= 1.0 {
        return Err(Error::Domain(format!("m_to_s needs m in (0, 1), got {m}")));
    }
    SParam::new((1.0 + m) / (1.0 - m))
}

/// `m = (s - 1) / (s + 1)`.
pub fn s_to_m(s: SParam) -> Result<ModulusM> {
    let s = s.get();
    ModulusM::new((s - 1.0) / (s + 1.0))
}

/// `x = p (1 - m) / m` for `m in (0, 1)`.
pub fn p_to_x(p: f64, m: ModulusM) -> Result<XVar> {
    if !m.is_below_one() {
        return Err(Error::Domain(format!("p_to_x needs m in (0, 1), got {}", m.get())));
    }
    let m = m.get();
    XVar::new(p * (1.0 - m) / m)
}

/// `p = x (s - 1) / 2`.
pub fn x_to_p(x: XVar, s: SParam) -> f64 {
    x.get() * (s.get() - 1.0) * 0.5
}

/// The `q3` Maxwell factor `cos(p/m) sin p - m cos p sin(p/m)`.
#[inline]
pub fn eval_g1(p: f64, m: f64) -> f64 {
    let pm = p / m;
    pm.cos() * p.sin() - m * p.cos() * pm.sin()
}

/// The `x q1 + y q2` Maxwell factor
/// `m p cos(p/m) sin p - (p cos p + (m^2 - 1) sin p) sin(p/m)`.
#[inline]
pub fn eval_g2(p: f64, m: f64) -> f64 {
    let pm = p / m;
    let (sp, cp) = p.sin_cos();
    m * p * pm.cos() * sp - (p * cp + (m * m - 1.0) * sp) * pm.sin()
}

/// `s sin x - sin(s x)`.
#[inline]
pub fn eval_gtilde(x: f64, s: f64) -> f64 {
    s * x.sin() - (s * x).sin()
}

/// `4 s (cos x - cos(s x)) - x (s^2 - 1) (s sin x + sin(s x))`.
#[inline]
pub fn eval_g2tilde(x: f64, s: f64) -> f64 {
    let sx = s * x;
    4.0 * s * (x.cos() - sx.cos()) - x * (s * s - 1.0) * (s * x.sin() + sx.sin())
}

/// `s sin x + sin(s x)`.
#[inline]
pub fn eval_h(x: f64, s: f64) -> f64 {
    s * x.sin() + (s * x).sin()
}

/// Rounding-error envelope of [`eval_g1`] at `(p, m)`.
///
/// Dominated by the rounding of the argument `p/m` and of the two products;
/// used as the "numerically zero" threshold when certifying brackets.
pub fn g1_noise(p: f64, m: f64) -> f64 {
    16.0 * EPS * (1.0 + m) * (1.0 + p.abs() + (p / m).abs())
}

/// Rounding-error envelope of [`eval_g2`] at `(p, m)`.
pub fn g2_noise(p: f64, m: f64) -> f64 {
    let mag = m * p.abs() + p.abs() + (m * m - 1.0).abs() + 1.0;
    16.0 * EPS * mag * (1.0 + p.abs() + (p / m).abs())
}

/// Rounding-error envelope of [`eval_gtilde`] and [`eval_h`].
pub fn gtilde_noise(x: f64, s: f64) -> f64 {
    16.0 * EPS * s * (1.0 + x.abs() * (1.0 + s))
}

/// Rounding-error envelope of [`eval_g2tilde`].
pub fn g2tilde_noise(x: f64, s: f64) -> f64 {
    let mag = 8.0 * s + x.abs() * (s * s + 1.0) * (s + 1.0);
    16.0 * EPS * mag * (1.0 + x.abs() * (1.0 + s))
}

/// `dg1/dp = ((m^2 - 1) / m) sin p sin(p/m)`.
pub fn dg1_dp(p: f64, m: f64) -> f64 {
    (m * m - 1.0) / m * p.sin() * (p / m).sin()
}

/// `dg1/dm = (m p cos p cos(p/m) + (p sin p - m^2 cos p) sin(p/m)) / m^2`.
pub fn dg1_dm(p: f64, m: f64) -> f64 {
    let pm = p / m;
    let (sp, cp) = p.sin_cos();
    (m * p * cp * pm.cos() + (p * sp - m * m * cp) * pm.sin()) / (m * m)
}

/// `d g2tilde / dx`.
pub fn dg2tilde_dx(x: f64, s: f64) -> f64 {
    let sx = s * x;
    let s2m1 = s * s - 1.0;
    sx.sin()
        - s * (s2m1 * x * x.cos() + s2m1 * x * sx.cos() + (s * s + 3.0) * x.sin()
            - 3.0 * s * sx.sin())
}

/// `d g2tilde / ds`.
pub fn dg2tilde_ds(x: f64, s: f64) -> f64 {
    let sx = s * x;
    4.0 * x.cos() + (-(s * s - 1.0) * x * x - 4.0) * sx.cos()
        + x * (-3.0 * x.sin() * s * s + 2.0 * sx.sin() * s + x.sin())
}

/// `f(x) = x cot x`.
///
/// The removable point `x -> 0+` (limit 1) is evaluated by its Maclaurin
/// series; genuine poles at nonzero multiples of `pi` return [`Error::Pole`].
pub fn eval_f(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("f(x) = x cot x needs x > 0, got {x}")));
    }
    if x < SERIES_THRESHOLD {
        let x2 = x * x;
        return Ok(1.0 - x2 / 3.0 - x2 * x2 / 45.0);
    }
    let (sx, cx) = x.sin_cos();
    if sx.abs() < POLE_TOL {
        return Err(Error::Pole { x, sin_abs: sx.abs() });
    }
    Ok(x * cx / sx)
}

/// `G(x) = (1 - x cot x) / x^2`, with `G(0+) = 1/3`.
pub fn eval_big_g(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("G(x) needs x > 0, got {x}")));
    }
    let x2 = x * x;
    if x2 < SERIES_THRESHOLD {
        // 1/3 + x^2/45 + 2x^4/945 + x^6/4725 + 2x^8/93555
        let x4 = x2 * x2;
        return Ok(1.0 / 3.0 + x2 / 45.0 + 2.0 * x4 / 945.0 + x4 * x2 / 4725.0
            + 2.0 * x4 * x4 / 93555.0);
    }
    let (sx, cx) = x.sin_cos();
    if sx.abs() < POLE_TOL {
        return Err(Error::Pole { x, sin_abs: sx.abs() });
    }
    Ok((1.0 - x * cx / sx) / x2)
}

/// Maclaurin series of [`eval_g2tilde`] from the `x^6` term on; the `x^2`
/// and `x^4` coefficients vanish identically.
fn g2tilde_series(x: f64, s: f64) -> f64 {
    let x2 = x * x;
    let s2 = s * s;
    let mut sum = 0.0;
    // x^{2n}, s^{2n-1}, (2n-1)! for n = 3
    let mut xn = x2 * x2 * x2;
    let mut s_odd = s2 * s2 * s;
    let mut fact = 120.0;
    let mut sign = 1.0;
    for n in 3..40 {
        let nf = f64::from(n);
        let even_fact = fact * 2.0 * nf;
        let a = 4.0 * s * (s_odd * s - 1.0) / even_fact - (s2 - 1.0) * (s + s_odd) / fact;
        let term = sign * a * xn;
        sum += term;
        if term.abs() <= EPS * sum.abs() {
            break;
        }
        xn *= x2;
        s_odd *= s2;
        fact = even_fact * (2.0 * nf + 1.0);
        sign = -sign;
    }
    sum
}

/// `J(x, s) = g2tilde(x, s) / H(x, s)` with `H = -(s^2 - 1) h(x, s)`.
///
/// For `s x < 1` the numerator comes from its Maclaurin series, which avoids
/// the cancellation of the closed form near `x = 0`.
pub fn eval_j(x: f64, s: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 || s <= 1.0 {
        return Err(Error::Domain(format!("J(x, s) needs x >= 0, s > 1, got ({x}, {s})")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let s2m1 = s * s - 1.0;
    let h = eval_h(x, s);
    if h.abs() < ASYMPTOTE_TOL {
        return Err(Error::Asymptote { x, s, h_abs: h.abs() });
    }
    let g = if s * x < 1.0 { g2tilde_series(x, s) } else { eval_g2tilde(x, s) };
    Ok(g / (-s2m1 * h))
}

/// Closed form of `dJ/dx`: `gtilde(x, s)^2 / h(x, s)^2`.
pub fn dj_dx(x: f64, s: f64) -> Result<f64> {
    let h = eval_h(x, s);
    if h.abs() < ASYMPTOTE_TOL {
        return Err(Error::Asymptote { x, s, h_abs: h.abs() });
    }
    let g = eval_gtilde(x, s);
    Ok(g * g / (h * h))
}

fn bisect_constant(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The root of `tan x = x` in `(pi, 3 pi / 2)`, approximately 4.493409.
pub fn const_rho() -> f64 {
    static RHO: OnceLock<f64> = OnceLock::new();
    *RHO.get_or_init(|| {
        // sin x - x cos x has no pole and the same root.
        bisect_constant(|x| x.sin() - x * x.cos(), PI + 1e-3, 3.0 * FRAC_PI_2)
    })
}

/// The root of `G(x) = 1/3` in `(pi, 2 pi)`, approximately 5.7634.
pub fn const_rho2() -> f64 {
    static RHO2: OnceLock<f64> = OnceLock::new();
    *RHO2.get_or_init(|| {
        // x^2 sin x G(x) - x^2 sin x / 3 = sin x - x cos x - x^2 sin x / 3
        bisect_constant(
            |x| x.sin() - x * x.cos() - x * x * x.sin() / 3.0,
            3.0 * FRAC_PI_2,
            2.0 * PI - 1e-3,
        )
    })
}
