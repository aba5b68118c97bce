//! Checking the analytic results against the sampling design itself.
//!
//! [`enumerate_exact`] visits every equally likely two-phase sample of a
//! small population and returns exact expectations. [`run_monte_carlo`]
//! replicates the design with independent seeded substreams, in parallel,
//! with a reduction that does not depend on the thread count.
//! [`generate_population`] builds synthetic populations with a target
//! correlation structure. [`compare`] lines either result up against an
//! analytic table.

pub mod accum;
mod compare;
mod enumerate;
mod generate;
mod monte_carlo;

use serde::{Deserialize, Serialize};

pub use compare::{compare, ComparisonReport, ComparisonRow, MseSource};
pub use enumerate::{enumerate_exact, outcome_count, EnumConfig, ExactRecord, ExactResult};
pub use generate::{correlation_cholesky, generate_population, GenSpec, GeneratedPopulation};
pub use monte_carlo::{run_monte_carlo, SimConfig, SimRecord, SimResult};

/// What to do with a sample on which an estimator's denominator vanishes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectionPolicy {
    Error,
    #[default]
    SkipAndCount,
}

/// Mixing weight used for the combined estimators.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaRule {
    /// Population-true `α_opt` for each `t*_i`.
    #[default]
    Optimal,
    Fixed(f64),
}

/// Maximum share of rejected replications tolerated under
/// [`RejectionPolicy::SkipAndCount`].
pub const REJECTION_CEILING: f64 = 1e-3;
