//! Point estimators of the population mean of `y`.
//!
//! Every estimator here is a function of the four sample means in
//! [`SampleMeans`] plus known population constants. The chain-ratio family
//! is indexed by an affine transform `(a, b)` of the second auxiliary
//! variable:
//!
//! ```text
//! t = ȳ · (x̄′ / x̄) · (a·Z̄ + b) / (a·z̄′ + b)
//! ```
//!
//! and the combined estimator mixes `t1 = t(1, 0)` with any member:
//! `t* = α·t1 + (1 − α)·t_i`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::design::SampleMeans;
use crate::error::{Error, Result};
use crate::population::PopulationSummary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EstimatorId {
    Ybar,
    ClassicalRatio,
    TwoPhaseRatio,
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    TStar2,
    TStar3,
    TStar4,
    TStar5,
    TStar6,
    TStar7,
}

impl EstimatorId {
    pub const ALL: [EstimatorId; 16] = [
        EstimatorId::Ybar,
        EstimatorId::ClassicalRatio,
        EstimatorId::TwoPhaseRatio,
        EstimatorId::T1,
        EstimatorId::T2,
        EstimatorId::T3,
        EstimatorId::T4,
        EstimatorId::T5,
        EstimatorId::T6,
        EstimatorId::T7,
        EstimatorId::TStar2,
        EstimatorId::TStar3,
        EstimatorId::TStar4,
        EstimatorId::TStar5,
        EstimatorId::TStar6,
        EstimatorId::TStar7,
    ];

    const CHAIN: [EstimatorId; 7] = [
        EstimatorId::T1,
        EstimatorId::T2,
        EstimatorId::T3,
        EstimatorId::T4,
        EstimatorId::T5,
        EstimatorId::T6,
        EstimatorId::T7,
    ];

    /// Name used on the command line and in output tables.
    pub fn name(self) -> &'static str {
        use EstimatorId::*;
        match self {
            Ybar => "ybar",
            ClassicalRatio => "ratio",
            TwoPhaseRatio => "rd",
            T1 => "t1",
            T2 => "t2",
            T3 => "t3",
            T4 => "t4",
            T5 => "t5",
            T6 => "t6",
            T7 => "t7",
            TStar2 => "tstar2",
            TStar3 => "tstar3",
            TStar4 => "tstar4",
            TStar5 => "tstar5",
            TStar6 => "tstar6",
            TStar7 => "tstar7",
        }
    }

    /// `Some(i)` for the chain member `t_i`, i in 1..=7.
    pub fn chain_index(self) -> Option<usize> {
        Self::CHAIN.iter().position(|&c| c == self).map(|p| p + 1)
    }

    /// `Some(i)` for the combined estimator `t*_i`, i in 2..=7.
    pub fn combined_index(self) -> Option<usize> {
        use EstimatorId::*;
        match self {
            TStar2 => Some(2),
            TStar3 => Some(3),
            TStar4 => Some(4),
            TStar5 => Some(5),
            TStar6 => Some(6),
            TStar7 => Some(7),
            _ => None,
        }
    }

    /// The chain member `t_i`.
    pub fn chain(i: usize) -> Option<EstimatorId> {
        (1..=7).contains(&i).then(|| Self::CHAIN[i - 1])
    }

    /// The chain member a combined estimator mixes with `t1`.
    pub fn combined_partner(self) -> Option<EstimatorId> {
        self.combined_index().and_then(Self::chain)
    }

    /// Everything except the classical ratio, which needs the population mean of
    /// x that two-phase sampling treats as unknown.
    pub fn default_simulation_set() -> Vec<EstimatorId> {
        EstimatorId::ALL
            .into_iter()
            .filter(|&id| id != EstimatorId::ClassicalRatio)
            .collect()
    }
}

impl fmt::Display for EstimatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        EstimatorId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or(Error::UnknownEstimator(s))
    }
}

/// An `(a, b)` pair selecting one member of the chain-ratio family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuxTransform {
    pub a: f64,
    pub b: f64,
    /// `Some(T1..T7)` for the tabled members, `None` for a custom pair.
    pub label: Option<EstimatorId>,
}

impl AuxTransform {
    pub fn custom(a: f64, b: f64) -> Result<Self> {
        if a == 0.0 || !a.is_finite() || !b.is_finite() {
            return Err(Error::DegenerateTransform {
                estimator: "custom",
            });
        }
        Ok(Self { a, b, label: None })
    }

    /// `t1`: `(a, b) = (1, 0)`.
    pub const fn chand() -> Self {
        Self {
            a: 1.0,
            b: 0.0,
            label: Some(EstimatorId::T1),
        }
    }
}

/// The `(a, b)` pair of the tabled chain estimators `t1..t7`:
///
/// | member | a       | b       |
/// |--------|---------|---------|
/// | t1     | 1       | 0       |
/// | t2     | 1       | C_z     |
/// | t3     | β2(z)   | C_z     |
/// | t4     | C_z     | β2(z)   |
/// | t5     | 1       | σ_z     |
/// | t6     | β1(z)   | σ_z     |
/// | t7     | β2(z)   | σ_z     |
pub fn transform_for(id: EstimatorId, s: &PopulationSummary) -> Result<AuxTransform> {
    let (a, b) = match id.chain_index() {
        Some(1) => (1.0, 0.0),
        Some(2) => (1.0, s.cv_z),
        Some(3) => (s.beta2_z, s.cv_z),
        Some(4) => (s.cv_z, s.beta2_z),
        Some(5) => (1.0, s.sigma_z),
        Some(6) => (s.beta1_z, s.sigma_z),
        Some(7) => (s.beta2_z, s.sigma_z),
        _ => {
            return Err(Error::InvalidConfig(format!(
                "{id} is not a chain-ratio member t1..t7"
            )))
        }
    };
    if a == 0.0 {
        return Err(Error::DegenerateTransform {
            estimator: id.name(),
        });
    }
    Ok(AuxTransform {
        a,
        b,
        label: Some(id),
    })
}

/// `θ = a·Z̄ / (a·Z̄ + b)`.
pub fn theta(t: &AuxTransform, mean_z: f64) -> Result<f64> {
    let num = t.a * mean_z;
    let den = num + t.b;
    if den == 0.0 {
        return Err(Error::ZeroDenominator("a*mean_z + b"));
    }
    Ok(num / den)
}

/// `(ȳ / x̄)·X̄`
pub fn classical_ratio(mean_y: f64, mean_x: f64, pop_mean_x: f64) -> Result<f64> {
    if mean_x == 0.0 {
        return Err(Error::ZeroDenominator("second-phase mean of x"));
    }
    Ok(mean_y / mean_x * pop_mean_x)
}

/// `(ȳ / x̄)·x̄′`
pub fn two_phase_ratio(mean_y: f64, mean_x: f64, mean_x_first: f64) -> Result<f64> {
    if mean_x == 0.0 {
        return Err(Error::ZeroDenominator("second-phase mean of x"));
    }
    Ok(mean_y / mean_x * mean_x_first)
}

pub fn chain_estimate(m: &SampleMeans, pop_mean_z: f64, t: &AuxTransform) -> Result<f64> {
    let rd = two_phase_ratio(m.mean_y_second, m.mean_x_second, m.mean_x_first)?;
    let den = t.a * m.mean_z_first + t.b;
    if den == 0.0 {
        return Err(Error::ZeroDenominator("a*(first-phase mean of z) + b"));
    }
    Ok(rd * (t.a * pop_mean_z + t.b) / den)
}

/// `α·t1 + (1 − α)·t_i`, both evaluated on the same sample. `α` is any real.
pub fn combined_estimate(
    m: &SampleMeans,
    pop_mean_z: f64,
    t: &AuxTransform,
    alpha: f64,
) -> Result<f64> {
    let t1 = chain_estimate(m, pop_mean_z, &AuxTransform::chand())?;
    let ti = chain_estimate(m, pop_mean_z, t)?;
    if t1 == ti {
        return Ok(t1);
    }
    Ok(alpha * t1 + (1.0 - alpha) * ti)
}

/// `K_yz = ρ_yz · C_y / C_z`
pub fn k_yz(s: &PopulationSummary) -> Result<f64> {
    if s.cv_z == 0.0 {
        return Err(Error::ZeroDenominator("cv_z"));
    }
    Ok(s.rho_yz * s.cv_y / s.cv_z)
}

/// MSE-minimising mixing weight `(K_yz − θ) / (1 − θ)`.
///
/// Fails for `θ = 1` (that is `t1` itself): mixing `t1` with itself has no
/// direction to optimise along.
pub fn alpha_opt(theta: f64, k_yz: f64) -> Result<f64> {
    if (1.0 - theta).abs() <= 4.0 * f64::EPSILON {
        return Err(Error::ThetaIsOne);
    }
    Ok((k_yz - theta) / (1.0 - theta))
}

/// Everything needed to evaluate a set of estimators on samples from one
/// population: known means of `x` and `z`, the `(a, b)` transforms and the
/// optimal mixing weights.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorSuite {
    ids: Vec<EstimatorId>,
    pop_mean_x: f64,
    pop_mean_z: f64,
    transforms: [Option<AuxTransform>; 7],
    thetas: [Option<f64>; 7],
    alphas: [Option<f64>; 7],
}

impl EstimatorSuite {
    /// Uses the population-true `α_opt` for every combined estimator.
    pub fn new(summary: &PopulationSummary, ids: &[EstimatorId]) -> Result<Self> {
        Self::build(summary, ids, None)
    }

    /// Uses the same fixed `α` for every combined estimator.
    pub fn with_fixed_alpha(
        summary: &PopulationSummary,
        ids: &[EstimatorId],
        alpha: f64,
    ) -> Result<Self> {
        Self::build(summary, ids, Some(alpha))
    }

    fn build(summary: &PopulationSummary, ids: &[EstimatorId], alpha: Option<f64>) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::InvalidConfig("empty estimator set".into()));
        }
        let mut suite = Self {
            ids: ids.to_vec(),
            pop_mean_x: summary.mean_x,
            pop_mean_z: summary.mean_z,
            transforms: [None; 7],
            thetas: [None; 7],
            alphas: [None; 7],
        };
        let k = k_yz(summary)?;
        let mut need = |i: usize| -> Result<()> {
            if suite.transforms[i - 1].is_none() {
                let id = EstimatorId::chain(i).expect("1..=7");
                let t = transform_for(id, summary)?;
                suite.thetas[i - 1] = Some(theta(&t, summary.mean_z)?);
                suite.transforms[i - 1] = Some(t);
            }
            Ok(())
        };
        for &id in ids {
            if let Some(i) = id.chain_index() {
                need(i)?;
            }
            if let Some(i) = id.combined_index() {
                need(1)?;
                need(i)?;
            }
        }
        for &id in ids {
            if let Some(i) = id.combined_index() {
                let th = suite.thetas[i - 1].expect("built above");
                suite.alphas[i - 1] = Some(match alpha {
                    Some(a) => a,
                    None => alpha_opt(th, k)?,
                });
            }
        }
        Ok(suite)
    }

    pub fn ids(&self) -> &[EstimatorId] {
        &self.ids
    }

    /// θ of a chain member or of the partner of a combined estimator.
    pub fn theta(&self, id: EstimatorId) -> Option<f64> {
        let i = id.chain_index().or(id.combined_index())?;
        self.thetas[i - 1]
    }

    pub fn alpha(&self, id: EstimatorId) -> Option<f64> {
        id.combined_index().and_then(|i| self.alphas[i - 1])
    }

    pub fn transform(&self, id: EstimatorId) -> Option<AuxTransform> {
        let i = id.chain_index().or(id.combined_index())?;
        self.transforms[i - 1]
    }

    pub fn evaluate(&self, id: EstimatorId, m: &SampleMeans) -> Result<f64> {
        match id {
            EstimatorId::Ybar => Ok(m.mean_y_second),
            EstimatorId::ClassicalRatio => {
                classical_ratio(m.mean_y_second, m.mean_x_second, self.pop_mean_x)
            }
            EstimatorId::TwoPhaseRatio => {
                two_phase_ratio(m.mean_y_second, m.mean_x_second, m.mean_x_first)
            }
            _ => {
                let missing = || Error::InvalidConfig(format!("{id} not in this suite"));
                if let Some(i) = id.chain_index() {
                    let t = self.transforms[i - 1].ok_or_else(missing)?;
                    chain_estimate(m, self.pop_mean_z, &t)
                } else {
                    let i = id.combined_index().expect("remaining ids are combined");
                    let t = self.transforms[i - 1].ok_or_else(missing)?;
                    let alpha = self.alphas[i - 1].ok_or_else(missing)?;
                    combined_estimate(m, self.pop_mean_z, &t, alpha)
                }
            }
        }
    }
}
