//! Command implementations behind the `plateball` binary.
//!
//! Every data command returns an [`OutputRecord`], which renders to CSV or
//! JSON with floats in shortest round-trip form.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt;
use std::fs;
use std::path::Path;

use plateball::maxwell::find_crossings;
use plateball::roots::{self, hyperbola, RootResult};
use plateball::special::{
    eval_big_g, eval_f, eval_g1, eval_g2, eval_g2tilde, eval_gtilde, eval_h, eval_j, ModulusM,
    SParam, EPS_SING,
};
use plateball::trajectory::{plane_quaternion_product, sample_trajectory, PendulumInit};
use plateball::verify::{lin_space, verify_all_with, GridSpec, Tolerances, VerificationReport};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] plateball::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config: {0}")]
    Config(#[from] toml::de::Error),
}

impl CliError {
    /// 2 for bad input, 3 when a root or crossing could not be found.
    pub fn exit_code(&self) -> u8 {
        use plateball::Error as E;
        match self {
            CliError::Core(E::NoSignChange { .. } | E::NoRootFound { .. } | E::EnclosureFailure { .. }) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A table of numbers under a fixed schema id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_num(v: f64) -> String {
    format!("{v:?}")
}

impl OutputRecord {
    pub fn new(schema: &str, columns: &[&str]) -> Self {
        Self {
            schema: schema.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// `# schema` comment line, header, then one line per row.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| fmt_num(*v)))?;
        }
        let body = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(format!("# schema: {}\n{}", self.schema, String::from_utf8_lossy(&body)))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let schema = text
            .lines()
            .next()
            .and_then(|l| l.strip_prefix("# schema: "))
            .ok_or_else(|| CliError::Usage("missing schema line".into()))?
            .to_string();
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let columns = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let row = rec?
                .iter()
                .map(|f| f.parse::<f64>().map_err(|e| CliError::Usage(format!("bad number {f:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(Self { schema, columns, rows })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Optional settings file; command-line flags win over it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub eps_sing: Option<f64>,
    pub root_tol: Option<f64>,
    pub grid: GridSpec,
    pub tolerances: Tolerances,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(toml::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn eps(&self) -> f64 {
        self.eps_sing.unwrap_or(EPS_SING)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EvalFn {
    G1,
    G2,
    Gtilde,
    G2tilde,
    H,
    F,
    #[value(name = "G")]
    BigG,
    J,
}

impl EvalFn {
    pub fn arg_names(self) -> &'static [&'static str] {
        match self {
            EvalFn::G1 | EvalFn::G2 => &["p", "m"],
            EvalFn::Gtilde | EvalFn::G2tilde | EvalFn::H | EvalFn::J => &["x", "s"],
            EvalFn::F | EvalFn::BigG => &["x"],
        }
    }

    fn schema(self) -> &'static str {
        match self {
            EvalFn::G1 => "eval.g1",
            EvalFn::G2 => "eval.g2",
            EvalFn::Gtilde => "eval.gtilde",
            EvalFn::G2tilde => "eval.g2tilde",
            EvalFn::H => "eval.h",
            EvalFn::F => "eval.f",
            EvalFn::BigG => "eval.G",
            EvalFn::J => "eval.j",
        }
    }
}

/// Evaluate one function at one point; `args` follows [`EvalFn::arg_names`].
pub fn cmd_eval(func: EvalFn, args: &[f64]) -> Result<OutputRecord> {
    let names = func.arg_names();
    if args.len() != names.len() {
        return Err(CliError::Usage(format!("{} takes {}", func.schema(), names.join(", "))));
    }
    let a = args[0];
    let b = args.get(1).copied().unwrap_or(f64::NAN);
    let value = match func {
        EvalFn::G1 => eval_g1(a, b),
        EvalFn::G2 => eval_g2(a, b),
        EvalFn::Gtilde => eval_gtilde(a, b),
        EvalFn::G2tilde => eval_g2tilde(a, b),
        EvalFn::H => eval_h(a, b),
        EvalFn::F => eval_f(a)?,
        EvalFn::BigG => eval_big_g(a)?,
        EvalFn::J => eval_j(a, b)?,
    };
    let mut cols = names.to_vec();
    cols.push("value");
    let mut out = OutputRecord::new(func.schema(), &cols);
    let mut row = args.to_vec();
    row.push(value);
    out.push(row);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RootKind {
    P1,
    P2,
    X1,
    X2,
}

/// One minimal root with its certifying bracket.
pub fn cmd_root(which: RootKind, param: f64, tol: f64, eps_sing: f64) -> Result<OutputRecord> {
    if !(tol > 0.0) {
        return Err(CliError::Usage(format!("tolerance must be positive, got {tol}")));
    }
    let (schema, name, r): (_, _, RootResult) = match which {
        RootKind::P1 => ("root.p1", "m", roots::p1_with_tol(ModulusM::with_eps(param, eps_sing)?, tol)?),
        RootKind::P2 => ("root.p2", "m", roots::p2_with_tol(ModulusM::with_eps(param, eps_sing)?, tol)?),
        RootKind::X1 => ("root.x1", "s", roots::x1_with_tol(SParam::new(param)?, tol)?),
        RootKind::X2 => ("root.x2", "s", roots::x2_with_tol(SParam::new(param)?, tol)?),
    };
    let mut out = OutputRecord::new(
        schema,
        &[name, "value", "bracket_lo", "bracket_hi", "residual", "iterations"],
    );
    out.push(vec![
        param,
        r.value,
        r.bracket.lo,
        r.bracket.hi,
        r.residual,
        f64::from(r.iterations),
    ]);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    /// p1(m) with its two-sided estimate
    P1,
    /// x1(s) with its two-sided estimate
    X1,
    /// p2(m) with its two-sided estimate
    P2,
    /// x1(s) and x2(s)
    X1x2,
    /// p1(m) and p2(m)
    P1p2,
}

impl Figure {
    /// Sweep used when no range is given.
    pub fn default_range(self) -> (f64, f64) {
        match self {
            Figure::P1 | Figure::P2 | Figure::P1p2 => (0.02, 0.98),
            Figure::X1 | Figure::X1x2 => (1.05, 12.0),
        }
    }
}

fn bounds_row(fig: Figure, v: f64, eps_sing: f64) -> Result<Vec<f64>> {
    let env = |b: roots::BoundCertificate| [b.lower, b.upper];
    Ok(match fig {
        Figure::P1 => {
            let p = roots::p1(ModulusM::with_eps(v, eps_sing)?)?.value;
            let [lo, hi] = env(roots::p1_bounds(v)?);
            vec![v, p, lo, hi, hyperbola(v)]
        }
        Figure::P2 => {
            let p = roots::p2(ModulusM::with_eps(v, eps_sing)?)?.value;
            let [lo, hi] = env(roots::p2_bounds(v)?);
            vec![v, p, lo, hi, hyperbola(v)]
        }
        Figure::X1 => {
            let x = roots::x1(SParam::new(v)?)?.value;
            let [lo, hi] = env(roots::x1_bounds(v)?);
            vec![v, x, lo, hi]
        }
        Figure::X1x2 => {
            let s = SParam::new(v)?;
            vec![v, roots::x1(s)?.value, roots::x2(s)?.value]
        }
        Figure::P1p2 => {
            let m = ModulusM::with_eps(v, eps_sing)?;
            vec![v, roots::p1(m)?.value, roots::p2(m)?.value]
        }
    })
}

/// Figure data on `count` equispaced samples of `[from, to]`. Samples inside
/// the excluded band around `m = 1` are skipped.
pub fn cmd_bounds(fig: Figure, from: f64, to: f64, count: usize, eps_sing: f64) -> Result<OutputRecord> {
    let (schema, cols): (_, &[&str]) = match fig {
        Figure::P1 => ("bounds.p1", &["m", "p1", "lower", "upper", "hyperbola"]),
        Figure::P2 => ("bounds.p2", &["m", "p2", "lower", "upper", "hyperbola"]),
        Figure::X1 => ("bounds.x1", &["s", "x1", "lower", "upper"]),
        Figure::X1x2 => ("bounds.x1x2", &["s", "x1", "x2"]),
        Figure::P1p2 => ("bounds.p1p2", &["m", "p1", "p2"]),
    };
    if !(from.is_finite() && to.is_finite() && from < to) || count < 2 {
        return Err(CliError::Usage(format!("bad sweep [{from}, {to}] with {count} samples")));
    }
    let samples = lin_space(from, to, count);
    let m_sweep = matches!(fig, Figure::P1 | Figure::P2 | Figure::P1p2);
    let rows = samples
        .into_par_iter()
        .filter(|v| !(m_sweep && (v - 1.0).abs() <= eps_sing))
        .map(|v| bounds_row(fig, v, eps_sing))
        .collect::<Result<Vec<_>>>()?;
    let mut out = OutputRecord::new(schema, cols);
    out.rows = rows;
    Ok(out)
}

/// Nontrivial and exact crossings of `p1` and `p2` for `k <= k_max`, by `m`.
pub fn cmd_crossings(k_max: u32) -> Result<OutputRecord> {
    let mut out = OutputRecord::new(
        "crossings",
        &["k", "m", "p", "enclosure_lo", "enclosure_hi", "residual", "trivial"],
    );
    for c in find_crossings(k_max)? {
        out.push(vec![
            f64::from(c.k),
            c.m_bar,
            c.p_at_crossing,
            c.enclosure.0,
            c.enclosure.1,
            c.residual,
            if c.trivial { 1.0 } else { 0.0 },
        ]);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryArgs {
    pub theta0: f64,
    pub d0: f64,
    pub rho0: f64,
    pub alpha: f64,
    pub m: f64,
    pub s_max: f64,
    pub count: usize,
}

/// Leading-order states; the second value is an amplitude warning, if any.
pub fn cmd_trajectory(a: &TrajectoryArgs, eps_sing: f64) -> Result<(OutputRecord, Option<String>)> {
    let init = PendulumInit::new(a.theta0, a.d0, a.rho0, a.alpha, ModulusM::with_eps(a.m, eps_sing)?)?;
    let mut out = OutputRecord::new(
        "trajectory",
        &["s", "xbar", "ybar", "q0", "q1", "q2", "q3", "xq1_yq2"],
    );
    for st in sample_trajectory(&init, a.s_max, a.count)? {
        out.push(vec![
            st.s,
            st.xbar,
            st.ybar,
            st.q0,
            st.q1,
            st.q2,
            st.q3,
            plane_quaternion_product(&st),
        ]);
    }
    Ok((out, init.amplitude_warning()))
}

/// Run every clause; the report goes to `out` as JSON when given.
pub fn cmd_verify(grid: &GridSpec, tol: &Tolerances, out: Option<&Path>) -> Result<VerificationReport> {
    let report = verify_all_with(grid, tol);
    if let Some(path) = out {
        fs::write(path, serde_json::to_string_pretty(&report)? + "\n")?;
    }
    Ok(report)
}

impl fmt::Display for OutputRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_csv() {
            Ok(s) => f.write_str(&s),
            Err(_) => Err(fmt::Error),
        }
    }
}
