use rayon::prelude::*;

use super::GridSpec;
use crate::roots;
use crate::special::ModulusM;

/// Roots at one grid value of `m`, both from the certified brackets and from
/// the independent oracle scan.
#[derive(Debug, Clone)]
pub struct MPoint {
    pub m: f64,
    pub p1: Result<f64, String>,
    pub p2: Result<f64, String>,
    pub p1_oracle: Result<f64, String>,
    pub p2_oracle: Result<f64, String>,
    pub p1_changed_sign: bool,
    pub p2_changed_sign: bool,
}

impl MPoint {
    pub fn compute(m: f64) -> Self {
        let mm = match ModulusM::new(m) {
            Ok(v) => v,
            Err(e) => {
                let e = e.to_string();
                return Self {
                    m,
                    p1: Err(e.clone()),
                    p2: Err(e.clone()),
                    p1_oracle: Err(e.clone()),
                    p2_oracle: Err(e),
                    p1_changed_sign: false,
                    p2_changed_sign: false,
                };
            }
        };
        let r1 = roots::p1(mm);
        let r2 = roots::p2(mm);
        Self {
            m,
            p1_changed_sign: r1.as_ref().map(|r| r.changed_sign).unwrap_or(false),
            p2_changed_sign: r2.as_ref().map(|r| r.changed_sign).unwrap_or(false),
            p1: r1.map(|r| r.value).map_err(|e| e.to_string()),
            p2: r2.map(|r| r.value).map_err(|e| e.to_string()),
            p1_oracle: roots::oracle_p1(mm).map(|r| r.value).map_err(|e| e.to_string()),
            p2_oracle: roots::oracle_p2(mm).map(|r| r.value).map_err(|e| e.to_string()),
        }
    }
}

/// The `m` grid of a [`GridSpec`] with all roots evaluated, sorted by `m`.
#[derive(Debug, Clone)]
pub struct MGrid {
    pub below: Vec<MPoint>,
    pub above: Vec<MPoint>,
}

impl MGrid {
    pub fn build(grid: &GridSpec) -> Self {
        let eval = |ms: Vec<f64>| -> Vec<MPoint> { ms.into_par_iter().map(MPoint::compute).collect() };
        Self {
            below: eval(grid.m_values_below()),
            above: eval(grid.m_values_above()),
        }
    }

    pub fn all(&self) -> impl Iterator<Item = &MPoint> {
        self.below.iter().chain(self.above.iter())
    }
}
