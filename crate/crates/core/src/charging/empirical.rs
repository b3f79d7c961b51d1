//! Exhaustive average x-ving counts set against the charging bounds.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::{
    max_charge, published_basic_params, published_refined_params, ChargeError, Mode,
    DEFAULT_EVAL_CAP,
};
use crate::geometry::PointSet;
use crate::vings::{ving_statistics, VingConfig, VingError};

#[derive(Debug, Clone, PartialEq)]
pub struct ModeComparison {
    pub mode: Mode,
    /// Max charge at the published parameters.
    pub max_charge: f64,
    /// (N - 3) * max_charge.
    pub bound: f64,
    /// bound - hat_vx; negative when the average exceeds the bound.
    pub margin: f64,
}

impl ModeComparison {
    pub fn flag(&self) -> &'static str {
        if self.margin >= 0.0 {
            "within"
        } else {
            "exceeds"
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalReport {
    pub n: usize,
    pub pg: num_bigint::BigUint,
    pub hat_vx: BigRational,
    pub comparisons: Vec<ModeComparison>,
}

impl EmpiricalReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "pg": self.pg.to_string(),
            "hat_vx": {
                "num": self.hat_vx.numer().to_string(),
                "den": self.hat_vx.denom().to_string(),
                "value": self.hat_vx.to_f64(),
            },
            "comparisons": self.comparisons.iter().map(|c| json!({
                "mode": c.mode.name(),
                "max_charge": c.max_charge,
                "bound": c.bound,
                "margin": c.margin,
                "flag": c.flag(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Reports, without asserting, how the exact average compares with the
/// per-ving charge bound in both modes.
pub fn empirical_report(s: &PointSet, config: &VingConfig) -> Result<EmpiricalReport, ChargeError> {
    if s.h() != 3 {
        return Err(ChargeError::NotTriangularHull(s.h()));
    }
    let stats = ving_statistics(s, config).map_err(|e| match e {
        VingError::ResourceLimit(msg) => ChargeError::ResourceLimit(msg),
        other => ChargeError::ResourceLimit(other.to_string()),
    })?;
    let hat = stats.hat_vx.to_f64().unwrap_or(f64::NAN);
    let mut comparisons = Vec::new();
    for (mode, params) in [
        (Mode::Basic, published_basic_params()),
        (Mode::Refined, published_refined_params()),
    ] {
        let mc = max_charge(&params, mode, DEFAULT_EVAL_CAP)?.max_charge;
        let bound = (s.n() - 3) as f64 * mc;
        comparisons.push(ModeComparison {
            mode,
            max_charge: mc,
            bound,
            margin: bound - hat,
        });
    }
    Ok(EmpiricalReport {
        n: s.n(),
        pg: stats.pg,
        hat_vx: stats.hat_vx,
        comparisons,
    })
}
