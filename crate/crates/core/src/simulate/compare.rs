use serde::{Deserialize, Serialize};

use super::{ExactResult, SimResult};
use crate::error::{Error, Result};
use crate::mse::{EvaluationTable, TSTAR_ROW};

/// Anything that reports an MSE (and optionally a PRE) per estimator name.
pub trait MseSource {
    fn mse_rows(&self) -> Vec<(String, f64, Option<f64>)>;
}

impl MseSource for EvaluationTable {
    fn mse_rows(&self) -> Vec<(String, f64, Option<f64>)> {
        self.rows
            .iter()
            .map(|r| (r.estimator.clone(), r.mse, r.pre))
            .collect()
    }
}

impl MseSource for SimResult {
    fn mse_rows(&self) -> Vec<(String, f64, Option<f64>)> {
        self.records
            .iter()
            .map(|r| (r.estimator.clone(), r.empirical_mse, r.empirical_pre))
            .collect()
    }
}

impl MseSource for ExactResult {
    fn mse_rows(&self) -> Vec<(String, f64, Option<f64>)> {
        self.records
            .iter()
            .map(|r| (r.estimator.clone(), r.exact_mse, r.exact_pre))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub estimator: String,
    pub analytic_mse: f64,
    pub empirical_mse: f64,
    /// `empirical / analytic`; absent when the analytic MSE is zero.
    pub mse_ratio: Option<f64>,
    /// `|empirical − analytic| / analytic`; 0 when both are zero.
    pub mse_rel_dev: f64,
    pub analytic_pre: Option<f64>,
    pub empirical_pre: Option<f64>,
    pub pre_rel_dev: Option<f64>,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub tolerance: f64,
    pub rows: Vec<ComparisonRow>,
}

fn rel_dev(empirical: f64, analytic: f64) -> f64 {
    if analytic == 0.0 {
        if empirical == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        ((empirical - analytic) / analytic).abs()
    }
}

/// Matches every empirical row to the analytic row of the same name (the
/// per-index combined rows `tstarK` fall back to a single `tstar` row) and
/// flags rows whose MSE or PRE deviates by more than `tolerance`, relative.
pub fn compare(
    analytic: &EvaluationTable,
    empirical: &dyn MseSource,
    tolerance: f64,
) -> Result<ComparisonReport> {
    let rows = empirical
        .mse_rows()
        .into_iter()
        .map(|(name, emp_mse, emp_pre)| {
            let a = analytic
                .row(&name)
                .or_else(|| {
                    name.starts_with("tstar")
                        .then(|| analytic.row(TSTAR_ROW))
                        .flatten()
                })
                .ok_or_else(|| Error::EstimatorMismatch(format!("no analytic row for `{name}`")))?;
            let mse_rel_dev = rel_dev(emp_mse, a.mse);
            let pre_rel_dev = match (emp_pre, a.pre) {
                (Some(e), Some(p)) => Some(rel_dev(e, p)),
                _ => None,
            };
            let flagged = mse_rel_dev > tolerance || pre_rel_dev.is_some_and(|d| d > tolerance);
            Ok(ComparisonRow {
                estimator: name,
                analytic_mse: a.mse,
                empirical_mse: emp_mse,
                mse_ratio: (a.mse != 0.0).then(|| emp_mse / a.mse),
                mse_rel_dev,
                analytic_pre: a.pre,
                empirical_pre: emp_pre,
                pre_rel_dev,
                flagged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonReport { tolerance, rows })
}

impl ComparisonReport {
    pub fn row(&self, estimator: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.estimator == estimator)
    }

    pub fn flagged(&self) -> impl Iterator<Item = &ComparisonRow> {
        self.rows.iter().filter(|r| r.flagged)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Serialize(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let opt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.4}"));
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<10} {:>14} {:>14} {:>10} {:>12} {:>12} {:>5}",
            "estimator",
            "analytic_mse",
            "empirical_mse",
            "mse_dev",
            "analytic_pre",
            "empirical_pre",
            "flag"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<10} {:>14.4} {:>14.4} {:>10.4} {:>12} {:>12} {:>5}",
                r.estimator,
                r.analytic_mse,
                r.empirical_mse,
                r.mse_rel_dev,
                opt(r.analytic_pre),
                opt(r.empirical_pre),
                if r.flagged { "*" } else { "" }
            );
        }
        out
    }
}
