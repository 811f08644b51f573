//! Leading-order small-amplitude trajectories and the two scalar Maxwell
//! conditions they produce.
//!
//! Everything here drops the `O(rho0^2)` remainder.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{eval_g1, eval_g2, ModulusM, SERIES_THRESHOLD};

/// Amplitudes above this make the leading-order terms unreliable.
pub const RHO0_WARN: f64 = 0.1;

/// Initial point of the pendulum in the rescaled system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PendulumInit {
    pub theta0: f64,
    /// Rescaled velocity `c0 / m`.
    pub d0: f64,
    pub rho0: f64,
    /// Rotation angle, normalised into `[0, 2 pi)`.
    pub alpha: f64,
    pub m: ModulusM,
}

impl PendulumInit {
    pub fn new(theta0: f64, d0: f64, rho0: f64, alpha: f64, m: ModulusM) -> Result<Self> {
        if !(theta0.is_finite() && d0.is_finite() && alpha.is_finite()) {
            return Err(Error::Domain("initial data must be finite".into()));
        }
        if !(rho0.is_finite() && rho0 >= 0.0) {
            return Err(Error::Domain(format!("rho0 must be nonnegative, got {rho0}")));
        }
        Ok(Self {
            theta0,
            d0,
            rho0,
            alpha: alpha.rem_euclid(TAU),
            m,
        })
    }

    pub fn c0(&self) -> f64 {
        self.m.get() * self.d0
    }

    pub fn amplitude_warning(&self) -> Option<String> {
        (self.rho0 > RHO0_WARN).then(|| {
            format!(
                "rho0 = {} exceeds {RHO0_WARN}; leading-order terms carry O(rho0^2) error",
                self.rho0
            )
        })
    }
}

/// Leading-order state at arc-time `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeadingState {
    pub s: f64,
    pub xbar: f64,
    pub ybar: f64,
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

fn check_s(s: f64) -> Result<()> {
    if s.is_finite() && s >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("s must be finite and nonnegative, got {s}")))
    }
}

/// `(xbar, ybar) = (s/m, (theta0 sin s + d0 (1 - cos s))/m)`.
pub fn leading_elastica(s: f64, init: &PendulumInit) -> Result<(f64, f64)> {
    check_s(s)?;
    let m = init.m.get();
    let y = (init.theta0 * s.sin() + init.d0 * (1.0 - s.cos())) / m;
    Ok((s / m, y))
}

/// Numerators of `q1`, `q3` as (theta0-part, d0-part), each still to be
/// divided by `2 (m^2 - 1)`.
fn quaternion_numerators(s: f64, m: f64) -> [f64; 4] {
    let (c, sn) = ((s / (2.0 * m)).cos(), (s / (2.0 * m)).sin());
    let (cs, ss) = (s.cos(), s.sin());
    [
        m * c * ss - (1.0 + cs) * sn,
        m * (1.0 - cs) * c - ss * sn,
        (cs - 1.0) * c + m * ss * sn,
        ss * c - m * (1.0 + cs) * sn,
    ]
}

/// The same four coefficients already divided by `2 (m^2 - 1)`, from the
/// Taylor expansion in `e = m - 1` (each numerator vanishes at `m = 1`).
fn quaternion_coefficients_series(s: f64, m: f64) -> [f64; 4] {
    let e = m - 1.0;
    let h = s / 2.0;
    let (c, sn) = (h.cos(), h.sin());
    let s2h = (2.0 * h).sin();
    let cubic = |d1: f64, d2: f64, d3: f64| (d1 + e * d2 / 2.0 + e * e * d3 / 6.0) / (2.0 * (2.0 + e));
    let plus = h * (-h * h - 1.5 * h * s2h + 6.0 * c * c);
    [
        cubic((2.0 * h + s2h) * c, -4.0 * h * c.powi(3), 2.0 * plus * c),
        cubic((2.0 * h + s2h) * sn, -4.0 * h * sn * c * c, 2.0 * plus * sn),
        cubic(
            (s2h - 2.0 * h) * sn,
            4.0 * h * sn.powi(3),
            2.0 * h * (h * h - 1.5 * h * s2h - 6.0 * sn * sn) * sn,
        ),
        cubic(
            (2.0 * h - s2h) * c,
            -4.0 * h * sn * sn * c,
            2.0 * h * (-h * h + 1.5 * h * s2h + 6.0 * sn * sn) * c,
        ),
    ]
}

/// Whether the removable `1/(m^2 - 1)` singularity is handled by series.
pub fn uses_series(s: f64, m: f64) -> bool {
    (m - 1.0).abs() * s.max(1.0) < SERIES_THRESHOLD
}

fn quaternion_coefficients(s: f64, m: f64) -> [f64; 4] {
    if uses_series(s, m) {
        return quaternion_coefficients_series(s, m);
    }
    let d = 2.0 * (m * m - 1.0);
    quaternion_numerators(s, m).map(|n| n / d)
}

fn quaternion_raw(s: f64, theta0: f64, d0: f64, m: f64) -> (f64, f64, f64, f64) {
    let [a1, b1, a3, b3] = quaternion_coefficients(s, m);
    let half = s / (2.0 * m);
    (
        half.cos(),
        a1 * theta0 + b1 * d0,
        -half.sin(),
        a3 * theta0 + b3 * d0,
    )
}

/// `(q0, q1, q2, q3)` at leading order. Near `m = 1` the coefficients of
/// `q1`, `q3` come from a three-term series, so `m` may come arbitrarily
/// close to 1.
pub fn leading_quaternion(s: f64, init: &PendulumInit) -> Result<(f64, f64, f64, f64)> {
    check_s(s)?;
    Ok(quaternion_raw(s, init.theta0, init.d0, init.m.get()))
}

/// Same as [`leading_quaternion`] with `m` given as a bare number, which is
/// allowed to sit inside the band excluded by [`ModulusM`].
pub fn leading_quaternion_at(s: f64, theta0: f64, d0: f64, m: f64) -> Result<(f64, f64, f64, f64)> {
    check_s(s)?;
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::Domain(format!("m must be positive, got {m}")));
    }
    Ok(quaternion_raw(s, theta0, d0, m))
}

pub fn leading_state(s: f64, init: &PendulumInit) -> Result<LeadingState> {
    let (xbar, ybar) = leading_elastica(s, init)?;
    let (q0, q1, q2, q3) = leading_quaternion(s, init)?;
    Ok(LeadingState { s, xbar, ybar, q0, q1, q2, q3 })
}

/// Rotate `(x, y)` and `(q1, q2)` by `A(alpha) = [[cos, sin], [-sin, cos]]`.
pub fn rotate_frame(alpha: f64, state: &LeadingState) -> LeadingState {
    let (c, s) = (alpha.cos(), alpha.sin());
    let rot = |a: f64, b: f64| (c * a + s * b, -s * a + c * b);
    let (xbar, ybar) = rot(state.xbar, state.ybar);
    let (q1, q2) = rot(state.q1, state.q2);
    LeadingState { xbar, ybar, q1, q2, ..*state }
}

fn check_off_one(m: f64) -> Result<()> {
    if (m - 1.0).abs() < crate::special::EPS_SING {
        return Err(Error::Domain(format!("m = {m} is too close to 1")));
    }
    Ok(())
}

/// `(d0 cos p - theta0 sin p) g1(p, m) / (m^2 - 1)`, the leading term of
/// `q3` at `s = 2p`.
pub fn maxwell1_leading(p: f64, init: &PendulumInit) -> Result<f64> {
    let m = init.m.get();
    check_off_one(m)?;
    let amp = init.d0 * p.cos() - init.theta0 * p.sin();
    Ok(amp * eval_g1(p, m) / (m * m - 1.0))
}

/// `2 (d0 sin p + theta0 cos p) g2(p, m) / (m (m^2 - 1))`, the leading term
/// of `x q1 + y q2` at `s = 2p`.
pub fn maxwell2_leading(p: f64, init: &PendulumInit) -> Result<f64> {
    let m = init.m.get();
    check_off_one(m)?;
    let amp = init.d0 * p.sin() + init.theta0 * p.cos();
    Ok(2.0 * amp * eval_g2(p, m) / (m * (m * m - 1.0)))
}

/// `x q1 + y q2`, which is invariant under [`rotate_frame`].
pub fn plane_quaternion_product(state: &LeadingState) -> f64 {
    state.xbar * state.q1 + state.ybar * state.q2
}

/// Samples of the leading state on `n + 1` equispaced arc-times in
/// `[0, s_max]`, rotated by `init.alpha`.
pub fn sample_trajectory(init: &PendulumInit, s_max: f64, n: usize) -> Result<Vec<LeadingState>> {
    check_s(s_max)?;
    if n == 0 {
        return Err(Error::Domain("need at least one step".into()));
    }
    (0..=n)
        .map(|i| {
            let s = s_max * i as f64 / n as f64;
            Ok(rotate_frame(init.alpha, &leading_state(s, init)?))
        })
        .collect()
}

/// Half-period `pi m` of `q0`, handy for choosing a sampling window.
pub fn quaternion_half_period(m: ModulusM) -> f64 {
    PI * m.get()
}
