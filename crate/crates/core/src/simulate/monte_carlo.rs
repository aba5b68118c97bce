use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::accum::{ErrorMoments, NeumaierSum};
use super::{RejectionPolicy, REJECTION_CEILING};
use crate::design::{substream, DesignSpec, SampleMeans, Sampler};
use crate::error::{Error, Result};
use crate::estimators::{EstimatorId, EstimatorSuite};
use crate::population::{summarize, FinitePopulation};

/// Replications per work unit. Fixed, so the reduction tree does not depend
/// on how many threads run it.
const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub replications: u64,
    pub seed: u64,
    pub rejection_policy: RejectionPolicy,
}

impl SimConfig {
    pub fn new(replications: u64, seed: u64) -> Self {
        Self {
            replications,
            seed,
            rejection_policy: RejectionPolicy::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRecord {
    pub estimator: String,
    pub empirical_mean: f64,
    pub empirical_bias: f64,
    pub empirical_mse: f64,
    pub empirical_pre: Option<f64>,
    /// Standard error of `empirical_mse`; absent with fewer than two replications.
    pub mse_std_error: Option<f64>,
    pub rejected_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub design: DesignSpec,
    pub seed: u64,
    pub population_mean_y: f64,
    pub replications_used: u64,
    /// Mean squared deviation of ȳ from Ȳ over the replications.
    pub base_empirical_var: f64,
    pub records: Vec<SimRecord>,
}

fn run_chunk(
    pop: &FinitePopulation,
    design: &DesignSpec,
    suite: &EstimatorSuite,
    cfg: &SimConfig,
    target: f64,
    reps: std::ops::Range<u64>,
) -> Result<(ErrorMoments, Vec<ErrorMoments>)> {
    let ids = suite.ids();
    let mut sampler = Sampler::new(pop.len());
    let mut base = ErrorMoments::default();
    let mut acc = vec![ErrorMoments::default(); ids.len()];
    for r in reps {
        let mut rng = substream(cfg.seed, r);
        let m = sampler.draw_with(&mut rng, design, |first, second| {
            SampleMeans::from_indices(pop, first, second)
        });
        base.push(m.mean_y_second, target);
        for (slot, &id) in acc.iter_mut().zip(ids) {
            match suite.evaluate(id, &m) {
                Ok(v) => slot.push(v, target),
                Err(e) => match cfg.rejection_policy {
                    RejectionPolicy::Error => {
                        return Err(Error::DegenerateOutcome {
                            estimator: id.name().into(),
                            reason: format!("replication {r}: {e}"),
                        })
                    }
                    RejectionPolicy::SkipAndCount => slot.reject(),
                },
            }
        }
    }
    Ok((base, acc))
}

/// Replicates the two-phase design `cfg.replications` times.
///
/// Replication `r` draws from [`substream`]`(seed, r)`. Combined estimators
/// use the population-true `α_opt`. The result is bit-identical for a given
/// `(seed, replications)` whatever the size of the rayon pool it runs on.
pub fn run_monte_carlo(
    pop: &FinitePopulation,
    design: &DesignSpec,
    estimators: &[EstimatorId],
    cfg: &SimConfig,
) -> Result<SimResult> {
    design.validate()?;
    if design.n_population != pop.len() {
        return Err(Error::SizeMismatch {
            design: design.n_population,
            population: pop.len(),
        });
    }
    if cfg.replications == 0 {
        return Err(Error::InvalidConfig("replications must be >= 1".into()));
    }
    let summary = summarize(pop)?;
    let suite = EstimatorSuite::new(&summary, estimators)?;
    let target = pop
        .units()
        .iter()
        .map(|u| u.y)
        .collect::<NeumaierSum>()
        .value()
        / pop.len() as f64;

    let chunks = cfg.replications.div_ceil(CHUNK);
    let partials: Vec<_> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(cfg.replications);
            run_chunk(pop, design, &suite, cfg, target, start..end)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut base = ErrorMoments::default();
    let mut acc = vec![ErrorMoments::default(); estimators.len()];
    for (b, parts) in &partials {
        base.merge(b);
        for (slot, p) in acc.iter_mut().zip(parts) {
            slot.merge(p);
        }
    }

    let base_var = base.mse();
    let mut records = Vec::with_capacity(estimators.len());
    for (id, m) in estimators.iter().zip(&acc) {
        let total = cfg.replications;
        if m.rejected as f64 > REJECTION_CEILING * total as f64 || m.count == 0 {
            return Err(Error::RejectionCeiling {
                estimator: id.name().into(),
                rejected: m.rejected,
                total,
            });
        }
        let mse = m.mse();
        records.push(SimRecord {
            estimator: id.name().into(),
            empirical_mean: m.mean(),
            empirical_bias: m.mean() - target,
            empirical_mse: mse,
            empirical_pre: (mse > 0.0).then(|| 100.0 * base_var / mse),
            mse_std_error: m.mse_std_error(),
            rejected_count: m.rejected,
        });
    }

    Ok(SimResult {
        design: *design,
        seed: cfg.seed,
        population_mean_y: target,
        replications_used: cfg.replications,
        base_empirical_var: base_var,
        records,
    })
}

impl SimResult {
    pub fn record(&self, estimator: &str) -> Option<&SimRecord> {
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
