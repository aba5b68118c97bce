//! Two-phase sampling estimators for a finite-population mean using two
//! auxiliary variables.
//!
//! The crate is organised the way the computation flows:
//!
//! - [`population`]: finite populations (`y`, `x`, `z` per unit) and the
//!   population parameters every formula consumes.
//! - [`design`]: the two-phase SRSWOR design, its variance factors and a
//!   seeded sampler.
//! - [`estimators`]: ratio, two-phase ratio, the `(a, b)` chain-ratio family
//!   and the α-combined estimator.
//! - [`mse`]: first-order MSE expressions, the minimum MSE of the combined
//!   estimator and percent relative efficiency tables.
//! - [`simulate`]: synthetic population generation, exact enumeration over
//!   all two-phase samples and Monte Carlo replication.
//! - [`cli`]: the `chainratio` command-line front end.
//!
//! ```
//! use chainratio::{mse::analytic_table, DesignSpec, PopulationSummary};
//!
//! let s = PopulationSummary::anderson();
//! let table = analytic_table(&s, &DesignSpec::new(25, 10, 7)?)?;
//! let t4 = table.row("t4").unwrap();
//! assert!((t4.pre.unwrap() - 186.3912).abs() < 1e-3);
//! println!("{}", table.to_text());
//! # Ok::<(), chainratio::Error>(())
//! ```

pub mod cli;
pub mod design;
pub mod error;
pub mod estimators;
pub mod mse;
pub mod population;
pub mod simulate;

pub use design::{DesignSpec, SampleFactors, SampleMeans, TwoPhaseSample};
pub use error::{Error, Result};
pub use estimators::{AuxTransform, EstimatorId, EstimatorSuite};
pub use mse::{EvalRow, EvaluationTable};
pub use population::{FinitePopulation, PopulationSummary, Unit};
