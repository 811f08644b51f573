use thiserror::Error;

/// Errors raised by evaluation, root localization and derived quantities.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `x cot x` and friends are undefined where `sin x` vanishes.
    #[error("pole at x = {x}: |sin x| = {sin_abs:e}")]
    Pole { x: f64, sin_abs: f64 },

    /// `J(x, s)` has vertical asymptotes at the roots of `h(x, s)`.
    #[error("vertical asymptote of J at x = {x}, s = {s}: |h| = {h_abs:e}")]
    Asymptote { x: f64, s: f64, h_abs: f64 },

    /// A bracket could not be certified, even after the oracle fallback.
    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo:e}, f(hi) = {f_hi:e}, clause {clause})")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
        clause: String,
    },

    /// The scanning oracle found no root in the requested window.
    #[error("no root found in [{lo}, {hi}]")]
    NoRootFound { lo: f64, hi: f64 },

    /// A crossing of p1 and p2 was not found inside its enclosure.
    #[error("no crossing of p1 and p2 inside ({lo}, {hi}) for k = {k}")]
    EnclosureFailure { k: u32, lo: f64, hi: f64 },

    /// The implicit-function derivative is undefined (vertical tangent).
    #[error("degenerate derivative at m = {m}: dg/dp = {dg_dp:e}")]
    DegenerateDerivative { m: f64, dg_dp: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
