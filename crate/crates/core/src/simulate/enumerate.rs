use serde::{Deserialize, Serialize};

use super::accum::{ErrorMoments, NeumaierSum};
use super::{AlphaRule, RejectionPolicy};
use crate::design::{DesignSpec, SampleMeans};
use crate::error::{Error, Result};
use crate::estimators::{EstimatorId, EstimatorSuite};
use crate::population::{summarize, FinitePopulation};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnumConfig {
    /// Refuse designs with more outcomes than this.
    pub max_outcomes: u128,
    pub policy: RejectionPolicy,
    pub alpha: AlphaRule,
}

impl Default for EnumConfig {
    fn default() -> Self {
        Self {
            max_outcomes: 10_000_000,
            policy: RejectionPolicy::default(),
            alpha: AlphaRule::default(),
        }
    }
}

/// Exact design moments of one estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactRecord {
    pub estimator: String,
    pub exact_mean: f64,
    pub exact_bias: f64,
    pub exact_mse: f64,
    pub exact_pre: Option<f64>,
    /// Outcomes dropped because a denominator vanished.
    pub excluded_count: u64,
    /// Total probability of the outcomes kept, after renormalisation.
    pub probability_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub design: DesignSpec,
    pub population_mean_y: f64,
    /// `C(N, n') · C(n', n)`, every outcome with probability `1 / outcome_count`.
    pub outcome_count: u64,
    pub base_exact_var: f64,
    pub records: Vec<ExactRecord>,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of equally likely two-phase outcomes, `C(N, n') · C(n', n)`.
pub fn outcome_count(design: &DesignSpec) -> u128 {
    binomial(design.n_population, design.n_first) * binomial(design.n_first, design.n_second)
}

/// Advances `idx` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
        return false;
    };
    idx[i] += 1;
    for j in i + 1..k {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

/// Exact expectation, bias and MSE of each estimator over every two-phase
/// sample, visited in lexicographic order of (first phase, second phase).
pub fn enumerate_exact(
    pop: &FinitePopulation,
    design: &DesignSpec,
    estimators: &[EstimatorId],
    cfg: &EnumConfig,
) -> Result<ExactResult> {
    design.validate()?;
    if design.n_population != pop.len() {
        return Err(Error::SizeMismatch {
            design: design.n_population,
            population: pop.len(),
        });
    }
    let count = outcome_count(design);
    if count > cfg.max_outcomes {
        return Err(Error::TooManyOutcomes {
            count,
            limit: cfg.max_outcomes,
        });
    }
    let summary = summarize(pop)?;
    let suite = match cfg.alpha {
        AlphaRule::Optimal => EstimatorSuite::new(&summary, estimators)?,
        AlphaRule::Fixed(a) => EstimatorSuite::with_fixed_alpha(&summary, estimators, a)?,
    };
    let target = pop
        .units()
        .iter()
        .map(|u| u.y)
        .collect::<NeumaierSum>()
        .value()
        / pop.len() as f64;

    let (big_n, n1, n) = (design.n_population, design.n_first, design.n_second);
    let mut base = ErrorMoments::default();
    let mut acc = vec![ErrorMoments::default(); estimators.len()];

    let mut first: Vec<usize> = (0..n1).collect();
    let mut pos: Vec<usize> = (0..n).collect();
    let mut second = vec![0usize; n];
    loop {
        loop {
            for (s, &p) in second.iter_mut().zip(&pos) {
                *s = first[p];
            }
            let m = SampleMeans::from_indices(pop, &first, &second);
            base.push(m.mean_y_second, target);
            for (slot, &id) in acc.iter_mut().zip(estimators) {
                match suite.evaluate(id, &m) {
                    Ok(v) => slot.push(v, target),
                    Err(e) => match cfg.policy {
                        RejectionPolicy::Error => {
                            return Err(Error::DegenerateOutcome {
                                estimator: id.name().into(),
                                reason: e.to_string(),
                            })
                        }
                        RejectionPolicy::SkipAndCount => slot.reject(),
                    },
                }
            }
            if !next_combination(&mut pos, n1) {
                break;
            }
        }
        pos.iter_mut().enumerate().for_each(|(i, p)| *p = i);
        if !next_combination(&mut first, big_n) {
            break;
        }
    }
    debug_assert_eq!(base.count as u128, count);

    let base_var = base.mse();
    let records = estimators
        .iter()
        .zip(&acc)
        .map(|(id, m)| {
            if m.count == 0 {
                return Err(Error::DegenerateOutcome {
                    estimator: id.name().into(),
                    reason: "every outcome was degenerate".into(),
                });
            }
            let weight = 1.0 / m.count as f64;
            let mse = m.mse();
            Ok(ExactRecord {
                estimator: id.name().into(),
                exact_mean: m.mean(),
                exact_bias: m.mean() - target,
                exact_mse: mse,
                exact_pre: (mse > 0.0).then(|| 100.0 * base_var / mse),
                excluded_count: m.rejected,
                probability_mass: weight * m.count as f64,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ExactResult {
        design: *design,
        population_mean_y: target,
        outcome_count: count as u64,
        base_exact_var: base_var,
        records,
    })
}

impl ExactResult {
    pub fn record(&self, estimator: &str) -> Option<&ExactRecord> {
        self.records.iter().find(|r| r.estimator == estimator)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(r)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Serialize(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}
