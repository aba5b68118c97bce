//! First-order (O(1/n)) mean squared errors and percent relative
//! efficiencies.
//!
//! All MSEs are in squared `y` units. With `g = α + θ − αθ`, the combined
//! estimator has
//!
//! ```text
//! MSE(t*) = Ȳ²[f1·C_y² + f3·C_x² + g²·f2·C_z² − 2·f3·ρ_yx·C_y·C_x − 2·g·f2·ρ_yz·C_y·C_z]
//! ```
//!
//! and every chain member is the special case `α = 0`, `g = θ`. Minimising
//! over `α` gives `g = K_yz` and the θ-free minimum
//! `M_o = Ȳ²[f1·C_y² + f3(C_x² − 2ρ_yx·C_y·C_x) − f2·ρ_yz²·C_y²]`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::design::{DesignSpec, SampleFactors};
use crate::error::Result;
use crate::estimators::{alpha_opt, k_yz, theta, transform_for, EstimatorId};
use crate::population::PopulationSummary;

/// `Var(ȳ) = f1·S_y² = f1·C_y²·Ȳ²`, the PRE base.
pub fn var_ybar(s: &PopulationSummary, f: &SampleFactors) -> f64 {
    s.mean_y * s.mean_y * f.f1 * s.cv_y * s.cv_y
}

fn x_term(s: &PopulationSummary) -> f64 {
    s.cv_x * s.cv_x - 2.0 * s.rho_xy * s.cv_y * s.cv_x
}

/// Single-phase ratio estimator with known `X̄`:
/// `Ȳ²·f1·(C_y² + C_x² − 2ρ_yx·C_y·C_x)`.
pub fn mse_classical_ratio(s: &PopulationSummary, f: &SampleFactors) -> f64 {
    s.mean_y * s.mean_y * f.f1 * (s.cv_y * s.cv_y + x_term(s))
}

/// `Ȳ²[f1·C_y² + f3(C_x² − 2ρ_yx·C_y·C_x)]`
pub fn mse_two_phase_ratio(s: &PopulationSummary, f: &SampleFactors) -> f64 {
    s.mean_y * s.mean_y * (f.f1 * s.cv_y * s.cv_y + f.f3 * x_term(s))
}

/// Chain member with shrinkage `θ`; `θ = 1` is `t1`, `θ = 0` is `ȳ_rd`.
pub fn mse_chain(s: &PopulationSummary, f: &SampleFactors, theta: f64) -> f64 {
    let z_term = theta * theta * s.cv_z * s.cv_z - 2.0 * theta * s.rho_yz * s.cv_y * s.cv_z;
    s.mean_y * s.mean_y * (f.f1 * s.cv_y * s.cv_y + f.f2 * z_term + f.f3 * x_term(s))
}

/// Combined estimator `α·t1 + (1 − α)·t_θ`.
pub fn mse_combined(s: &PopulationSummary, f: &SampleFactors, theta: f64, alpha: f64) -> f64 {
    let g = alpha + theta - alpha * theta;
    let (cy, cx, cz) = (s.cv_y, s.cv_x, s.cv_z);
    s.mean_y
        * s.mean_y
        * (f.f1 * cy * cy + f.f3 * cx * cx + g * g * f.f2 * cz * cz
            - 2.0 * f.f3 * s.rho_xy * cy * cx
            - 2.0 * g * f.f2 * s.rho_yz * cy * cz)
}

/// `M_o`, the minimum over α of [`mse_combined`]; independent of θ.
pub fn min_mse_combined(s: &PopulationSummary, f: &SampleFactors) -> f64 {
    let cy2 = s.cv_y * s.cv_y;
    s.mean_y * s.mean_y * (f.f1 * cy2 + f.f3 * x_term(s) - f.f2 * s.rho_yz * s.rho_yz * cy2)
}

/// `MSE(t_θ) − M_o = Ȳ²·f2·(θ·C_z − ρ_yz·C_y)²`, never negative.
pub fn efficiency_gap(s: &PopulationSummary, f: &SampleFactors, theta: f64) -> f64 {
    let d = theta * s.cv_z - s.rho_yz * s.cv_y;
    s.mean_y * s.mean_y * f.f2 * d * d
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub estimator: String,
    pub theta: Option<f64>,
    pub mse: f64,
    /// `None` when the MSE is zero (census designs).
    pub pre: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationTable {
    pub rows: Vec<EvalRow>,
    pub base_variance: f64,
    pub design: DesignSpec,
}

/// Row label of the single combined-estimator row in [`analytic_table`].
pub const TSTAR_ROW: &str = "tstar";

fn pre(base: f64, mse: f64) -> Option<f64> {
    (mse > 0.0).then(|| 100.0 * base / mse)
}

fn row(estimator: impl Into<String>, theta: Option<f64>, mse: f64, base: f64) -> EvalRow {
    EvalRow {
        estimator: estimator.into(),
        theta,
        mse,
        pre: pre(base, mse),
    }
}

/// The standard comparison: `ȳ`, `ȳ_rd`, `t1..t7` and one row for the
/// optimally combined estimator (its minimum MSE does not depend on which
/// `t_i` is mixed with `t1`).
pub fn analytic_table(s: &PopulationSummary, design: &DesignSpec) -> Result<EvaluationTable> {
    design.validate()?;
    let f = design.factors();
    let base = var_ybar(s, &f);
    let mut rows = vec![
        row(EstimatorId::Ybar.name(), None, base, base),
        row(
            EstimatorId::TwoPhaseRatio.name(),
            None,
            mse_two_phase_ratio(s, &f),
            base,
        ),
    ];
    for i in 1..=7 {
        let id = EstimatorId::chain(i).expect("1..=7");
        let th = theta(&transform_for(id, s)?, s.mean_z)?;
        rows.push(row(id.name(), Some(th), mse_chain(s, &f, th), base));
    }
    rows.push(row(TSTAR_ROW, None, min_mse_combined(s, &f), base));
    Ok(EvaluationTable {
        rows,
        base_variance: base,
        design: *design,
    })
}

/// First-order MSE of any estimator in the crate, with combined estimators
/// at their optimal α.
pub fn analytic_mse(id: EstimatorId, s: &PopulationSummary, f: &SampleFactors) -> Result<f64> {
    Ok(match id {
        EstimatorId::Ybar => var_ybar(s, f),
        EstimatorId::ClassicalRatio => mse_classical_ratio(s, f),
        EstimatorId::TwoPhaseRatio => mse_two_phase_ratio(s, f),
        _ => {
            if let Some(partner) = id.combined_partner() {
                let th = theta(&transform_for(partner, s)?, s.mean_z)?;
                let alpha = alpha_opt(th, k_yz(s)?)?;
                mse_combined(s, f, th, alpha)
            } else {
                let th = theta(&transform_for(id, s)?, s.mean_z)?;
                mse_chain(s, f, th)
            }
        }
    })
}

/// One row per requested estimator (combined estimators get their own rows,
/// all at `M_o`). Used to line analytic values up against simulations.
pub fn analytic_table_for(
    s: &PopulationSummary,
    design: &DesignSpec,
    ids: &[EstimatorId],
) -> Result<EvaluationTable> {
    design.validate()?;
    let f = design.factors();
    let base = var_ybar(s, &f);
    let rows = ids
        .iter()
        .map(|&id| {
            let th = match id.chain_index().or(id.combined_index()) {
                Some(i) => {
                    let partner = EstimatorId::chain(i).expect("1..=7");
                    Some(theta(&transform_for(partner, s)?, s.mean_z)?)
                }
                None => None,
            };
            Ok(row(id.name(), th, analytic_mse(id, s, &f)?, base))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvaluationTable {
        rows,
        base_variance: base,
        design: *design,
    })
}

fn fmt_opt(v: Option<f64>, na: &str) -> String {
    v.map_or_else(|| na.to_string(), |v| format!("{v:.4}"))
}

impl EvaluationTable {
    pub fn row(&self, estimator: &str) -> Option<&EvalRow> {
        self.rows.iter().find(|r| r.estimator == estimator)
    }

    /// Aligned text, numerics right-aligned at 4 decimals.
    pub fn to_text(&self) -> String {
        let d = &self.design;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "design: N = {}, n' = {}, n = {}; Var(ybar) = {:.4}",
            d.n_population, d.n_first, d.n_second, self.base_variance
        );
        let _ = writeln!(
            out,
            "{:<10} {:>10} {:>14} {:>12}",
            "estimator", "theta", "mse", "pre"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<10} {:>10} {:>14.4} {:>12}",
                r.estimator,
                fmt_opt(r.theta, "-"),
                r.mse,
                fmt_opt(r.pre, "n/a")
            );
        }
        out
    }

    /// CSV with header `estimator,theta,mse,pre`; full precision, empty
    /// fields for absent values.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["estimator", "theta", "mse", "pre"])?;
        for r in &self.rows {
            let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
            w.write_record([
                r.estimator.clone(),
                opt(r.theta),
                r.mse.to_string(),
                opt(r.pre),
            ])?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| crate::Error::Serialize(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
