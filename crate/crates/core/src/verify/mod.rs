//! Grid checks of every stated estimate, collected into a machine-readable
//! report.
//!
//! Each clause is identified by a short id (`"T1.c"`, `"L1"`, `"P.g2_3"`,
//! ...). Inequalities are recorded as signed violations: a value `<= 0`
//! means the inequality holds, and a sample fails when its violation exceeds
//! the slack.

mod data;
mod lemmas;
mod theorems;

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

pub use data::{MGrid, MPoint};
pub use lemmas::verify_lemmas_props_on;
pub use theorems::{verify_theorem1_on, verify_theorem2_on, verify_theorem3_on};

/// Every clause the verifier knows, in report order.
pub const REGISTRY: &[&str] = &[
    "T1.a", "T1.b", "T1.c", "T1.d", "T1.e", "T1.f", "T2.a", "T2.b", "T2.c", "T2.d", "T2.e",
    "T3.a", "T3.b", "T3.c", "T3.d", "T3.e", "E.p1_general", "L1", "C1", "P.g1_1", "P.g1_2",
    "L2", "P.g2_1", "R.g2_1", "stat.g2_1", "P.g2_2", "P.g2_3", "p1'.vert", "x2'.odd",
];

const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSpec {
    pub m_points_per_side: usize,
    pub m_below: (f64, f64),
    pub m_above: (f64, f64),
    pub s_points: usize,
    pub s_range: (f64, f64),
    pub k_max: u32,
    /// Samples per `k`-indexed subinterval for the stratified checks.
    pub per_band: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            m_points_per_side: 2000,
            m_below: (0.02, 0.98),
            m_above: (1.02, 50.0),
            s_points: 500,
            s_range: (2.05, 30.0),
            k_max: 4,
            per_band: 20,
        }
    }
}

impl GridSpec {
    pub fn m_values_below(&self) -> Vec<f64> {
        log_space(self.m_below.0, self.m_below.1, self.m_points_per_side)
    }

    pub fn m_values_above(&self) -> Vec<f64> {
        log_space(self.m_above.0, self.m_above.1, self.m_points_per_side)
    }

    pub fn s_values(&self) -> Vec<f64> {
        lin_space(self.s_range.0, self.s_range.1, self.s_points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Allowed violation of a strict inequality.
    pub slack: f64,
    /// Absolute tolerance for closed-form values.
    pub exact: f64,
    /// Absolute tolerance when an oracle root is compared with a closed form
    /// at a root of multiplicity three.
    pub oracle_triple: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            slack: 1e-12,
            exact: 1e-10,
            oracle_triple: 1e-6,
        }
    }
}

/// `n` points spaced uniformly in `ln` between `a` and `b` inclusive.
pub fn log_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    lin_space(la, lb, n).into_iter().map(f64::exp).collect()
}

pub fn lin_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// `n` interior points of `(a, b)` at the centres of equal cells.
pub fn interior(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * (i as f64 + 0.5) / n as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub parameter: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClauseCheck {
    pub clause_id: String,
    pub samples: usize,
    pub failures: usize,
    pub worst_violation: f64,
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ClauseCheck {
    pub fn new(clause_id: &str) -> Self {
        Self {
            clause_id: clause_id.to_string(),
            samples: 0,
            failures: 0,
            worst_violation: f64::NEG_INFINITY,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Record one sample with signed violation `v`.
    pub fn record(&mut self, parameter: f64, v: f64, values: &[f64], slack: f64) {
        self.samples += 1;
        let v = if v.is_nan() { f64::MAX } else { v };
        if v > self.worst_violation {
            self.worst_violation = v;
        }
        if v > slack {
            self.failures += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(Witness {
                    parameter,
                    values: values.to_vec(),
                });
            }
        }
    }

    pub fn record_bool(&mut self, parameter: f64, ok: bool, values: &[f64]) {
        self.record(parameter, if ok { -1.0 } else { 1.0 }, values, 0.0);
    }

    pub fn record_error(&mut self, parameter: f64, err: impl std::fmt::Display) {
        self.record(parameter, f64::MAX, &[], 0.0);
        if self.notes.len() < MAX_WITNESSES {
            self.notes.push(format!("at {parameter}: {err}"));
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.samples > 0
    }

    fn finish(mut self) -> Self {
        if self.samples == 0 {
            self.worst_violation = 0.0;
            self.failures = 1;
            self.notes.push("no samples".into());
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub clauses: Vec<ClauseCheck>,
    pub grid: GridSpec,
    pub tolerances: Tolerances,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl VerificationReport {
    fn new(clauses: Vec<ClauseCheck>, grid: &GridSpec, tol: &Tolerances) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            clauses: clauses.into_iter().map(ClauseCheck::finish).collect(),
            grid: grid.clone(),
            tolerances: *tol,
            timestamp,
        }
    }

    pub fn total_failures(&self) -> usize {
        self.clauses.iter().map(|c| c.failures).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_failures() == 0
    }

    pub fn clause(&self, id: &str) -> Option<&ClauseCheck> {
        self.clauses.iter().find(|c| c.clause_id == id)
    }

    /// One line per clause.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.clauses {
            out.push_str(&format!(
                "{:<14} {} samples={} failures={} worst={:e}\n",
                c.clause_id,
                if c.failures == 0 { "PASS" } else { "FAIL" },
                c.samples,
                c.failures,
                c.worst_violation
            ));
        }
        out
    }
}

pub fn verify_theorem1(grid: &GridSpec) -> VerificationReport {
    let tol = Tolerances::default();
    let data = MGrid::build(grid);
    VerificationReport::new(verify_theorem1_on(&data, grid, &tol), grid, &tol)
}

pub fn verify_theorem2(grid: &GridSpec) -> VerificationReport {
    let tol = Tolerances::default();
    let data = MGrid::build(grid);
    VerificationReport::new(verify_theorem2_on(&data, grid, &tol), grid, &tol)
}

pub fn verify_theorem3(grid: &GridSpec) -> VerificationReport {
    let tol = Tolerances::default();
    let data = MGrid::build(grid);
    VerificationReport::new(verify_theorem3_on(&data, grid, &tol), grid, &tol)
}

pub fn verify_lemmas_props(grid: &GridSpec) -> VerificationReport {
    let tol = Tolerances::default();
    VerificationReport::new(verify_lemmas_props_on(grid, &tol), grid, &tol)
}

/// Every registered clause, each exactly once, in [`REGISTRY`] order.
pub fn verify_all(grid: &GridSpec) -> VerificationReport {
    verify_all_with(grid, &Tolerances::default())
}

pub fn verify_all_with(grid: &GridSpec, tol: &Tolerances) -> VerificationReport {
    let data = MGrid::build(grid);
    let mut clauses = verify_theorem1_on(&data, grid, tol);
    clauses.extend(verify_theorem2_on(&data, grid, tol));
    clauses.extend(verify_theorem3_on(&data, grid, tol));
    clauses.extend(verify_lemmas_props_on(grid, tol));
    clauses.sort_by_key(|c| REGISTRY.iter().position(|id| *id == c.clause_id));
    VerificationReport::new(clauses, grid, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing() {
        let v = log_space(0.02, 0.98, 5);
        assert_eq!(v.len(), 5);
        assert!((v[0] - 0.02).abs() < 1e-15 && (v[4] - 0.98).abs() < 1e-14);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(interior(0.0, 1.0, 2), vec![0.25, 0.75]);
    }

    #[test]
    fn clause_accounting() {
        let mut c = ClauseCheck::new("x");
        c.record(1.0, -0.5, &[], 1e-12);
        c.record(2.0, 5e-13, &[], 1e-12);
        assert_eq!(c.failures, 0);
        c.record(3.0, 1e-6, &[3.0], 1e-12);
        assert_eq!(c.failures, 1);
        assert_eq!(c.worst_violation, 1e-6);
        assert_eq!(c.witnesses[0].parameter, 3.0);
        assert!(!ClauseCheck::new("y").finish().passed());
    }
}
