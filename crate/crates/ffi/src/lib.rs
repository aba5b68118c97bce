//! C ABI over the `chainratio` crate.
//!
//! Conventions:
//!
//! - Every fallible function returns a [`CrStatus`]; results go through out
//!   pointers. On failure [`cr_last_error_message`] describes the error.
//! - Populations, summaries, tables and simulation results are opaque
//!   handles created by `cr_*_load` / `cr_*_new` style functions and released
//!   with the matching `cr_*_free`. Handles are immutable, so one handle may
//!   be read from several threads.
//! - Strings returned by the library stay owned by the library.
//! - Panics never cross the boundary; they surface as `CR_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use chainratio::estimators::{self, AuxTransform};
use chainratio::mse;
use chainratio::population::{self, FinitePopulation, PopulationSummary, Unit};
use chainratio::simulate::{self, EnumConfig, SimConfig};
use chainratio::{DesignSpec, EstimatorId, EvaluationTable, SampleMeans};

/// Status codes. 1..=3 match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrStatus {
    Ok = 0,
    ValidationError = 1,
    DataError = 2,
    NumericGuard = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(CrStatus, String);

impl From<chainratio::Error> for Failure {
    fn from(e: chainratio::Error) -> Self {
        let status = match e.exit_code() {
            1 => CrStatus::ValidationError,
            3 => CrStatus::NumericGuard,
            _ => CrStatus::DataError,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CrStatus::NullPointer, format!("{what} is null"))
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> CrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CrStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside chainratio");
            CrStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(CrStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn design(n_population: usize, n_first: usize, n_second: usize) -> Result<DesignSpec, Failure> {
    Ok(DesignSpec::new(n_population, n_first, n_second)?)
}

/// Message for the most recent failure on this thread, or NULL. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ---------------------------------------------------------------- summaries

/// Opaque population summary.
pub struct CrSummary(PopulationSummary);

/// Every field of a population summary.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CrSummaryValues {
    pub n_population: usize,
    pub mean_y: f64,
    pub mean_x: f64,
    pub mean_z: f64,
    pub s2_y: f64,
    pub s2_x: f64,
    pub s2_z: f64,
    pub s_xy: f64,
    pub s_xz: f64,
    pub s_yz: f64,
    pub cv_y: f64,
    pub cv_x: f64,
    pub cv_z: f64,
    pub rho_xy: f64,
    pub rho_xz: f64,
    pub rho_yz: f64,
    pub sigma_z: f64,
    pub beta1_z: f64,
    pub beta2_z: f64,
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Loads a `key = value` summary file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_summary_load(
    path: *const c_char,
    out: *mut *mut CrSummary,
) -> CrStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let path = c_str(path, "path")?;
        let file =
            File::open(path).map_err(|e| Failure(CrStatus::DataError, format!("{path}: {e}")))?;
        *out = boxed(CrSummary(population::load_summary(file)?));
        Ok(())
    })
}

/// Parses summary-file text held in memory.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_summary_parse(
    text: *const c_char,
    out: *mut *mut CrSummary,
) -> CrStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let text = c_str(text, "text")?;
        *out = boxed(CrSummary(population::load_summary(text.as_bytes())?));
        Ok(())
    })
}

/// The bundled head-measurement summary.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_summary_anderson(out: *mut *mut CrSummary) -> CrStatus {
    guard(|| {
        *out_ref(out, "out")? = boxed(CrSummary(PopulationSummary::anderson()));
        Ok(())
    })
}

/// # Safety
/// `summary` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_summary_values(
    summary: *const CrSummary,
    out: *mut CrSummaryValues,
) -> CrStatus {
    guard(|| {
        let s = &borrow(summary, "summary")?.0;
        *out_ref(out, "out")? = CrSummaryValues {
            n_population: s.n_population,
            mean_y: s.mean_y,
            mean_x: s.mean_x,
            mean_z: s.mean_z,
            s2_y: s.s2_y,
            s2_x: s.s2_x,
            s2_z: s.s2_z,
            s_xy: s.s_xy,
            s_xz: s.s_xz,
            s_yz: s.s_yz,
            cv_y: s.cv_y,
            cv_x: s.cv_x,
            cv_z: s.cv_z,
            rho_xy: s.rho_xy,
            rho_xz: s.rho_xz,
            rho_yz: s.rho_yz,
            sigma_z: s.sigma_z,
            beta1_z: s.beta1_z,
            beta2_z: s.beta2_z,
        };
        Ok(())
    })
}

/// # Safety
/// `summary` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cr_summary_free(summary: *mut CrSummary) {
    if !summary.is_null() {
        drop(Box::from_raw(summary));
    }
}

// -------------------------------------------------------------- populations

/// Opaque finite population.
pub struct CrPopulation(FinitePopulation);

/// Loads a `y,x,z` CSV file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_population_load_csv(
    path: *const c_char,
    out: *mut *mut CrPopulation,
) -> CrStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let path = c_str(path, "path")?;
        let file =
            File::open(path).map_err(|e| Failure(CrStatus::DataError, format!("{path}: {e}")))?;
        *out = boxed(CrPopulation(population::load_population(file, path)?));
        Ok(())
    })
}

/// Builds a population from three arrays of length `len`.
///
/// # Safety
/// `y`, `x` and `z` must each point to `len` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn cr_population_from_arrays(
    y: *const f64,
    x: *const f64,
    z: *const f64,
    len: usize,
    out: *mut *mut CrPopulation,
) -> CrStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if y.is_null() || x.is_null() || z.is_null() {
            return Err(null("value array"));
        }
        let (y, x, z) = (
            std::slice::from_raw_parts(y, len),
            std::slice::from_raw_parts(x, len),
            std::slice::from_raw_parts(z, len),
        );
        let units = (0..len)
            .map(|i| Unit {
                y: y[i],
                x: x[i],
                z: z[i],
            })
            .collect();
        *out = boxed(CrPopulation(FinitePopulation::new("ffi", units)?));
        Ok(())
    })
}

/// Number of units, or 0 for NULL.
///
/// # Safety
/// `pop` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cr_population_len(pop: *const CrPopulation) -> usize {
    pop.as_ref().map_or(0, |p| p.0.len())
}

/// # Safety
/// `pop` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_population_summarize(
    pop: *const CrPopulation,
    out: *mut *mut CrSummary,
) -> CrStatus {
    guard(|| {
        let pop = &borrow(pop, "population")?.0;
        let out = out_ref(out, "out")?;
        *out = boxed(CrSummary(population::summarize(pop)?));
        Ok(())
    })
}

/// # Safety
/// `pop` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cr_population_free(pop: *mut CrPopulation) {
    if !pop.is_null() {
        drop(Box::from_raw(pop));
    }
}

// ------------------------------------------------------- design, estimators

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CrFactors {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
}

/// The four sample means an estimator needs.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CrSampleMeans {
    pub mean_y_second: f64,
    pub mean_x_second: f64,
    pub mean_x_first: f64,
    pub mean_z_first: f64,
}

impl From<CrSampleMeans> for SampleMeans {
    fn from(m: CrSampleMeans) -> Self {
        SampleMeans {
            mean_y_second: m.mean_y_second,
            mean_x_second: m.mean_x_second,
            mean_x_first: m.mean_x_first,
            mean_z_first: m.mean_z_first,
        }
    }
}

/// Variance factors of the design `(N, n', n)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_design_factors(
    n_population: usize,
    n_first: usize,
    n_second: usize,
    out: *mut CrFactors,
) -> CrStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let f = design(n_population, n_first, n_second)?.factors();
        *out = CrFactors {
            f1: f.f1,
            f2: f.f2,
            f3: f.f3,
        };
        Ok(())
    })
}

/// `(a, b)` of chain member `t_index` (1..=7) under `summary`.
///
/// # Safety
/// `summary` must be valid; `a` and `b` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_transform(
    summary: *const CrSummary,
    t_index: u32,
    a: *mut f64,
    b: *mut f64,
) -> CrStatus {
    guard(|| {
        let s = &borrow(summary, "summary")?.0;
        let (a, b) = (out_ref(a, "a")?, out_ref(b, "b")?);
        let id = EstimatorId::chain(t_index as usize).ok_or_else(|| {
            Failure(
                CrStatus::ValidationError,
                format!("t_index {t_index} not in 1..=7"),
            )
        })?;
        let t = estimators::transform_for(id, s)?;
        *a = t.a;
        *b = t.b;
        Ok(())
    })
}

/// `θ = a·Z̄ / (a·Z̄ + b)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_theta(a: f64, b: f64, mean_z: f64, out: *mut f64) -> CrStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = estimators::theta(&AuxTransform::custom(a, b)?, mean_z)?;
        Ok(())
    })
}

/// # Safety
/// `summary` must be valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_k_yz(summary: *const CrSummary, out: *mut f64) -> CrStatus {
    guard(|| {
        let s = &borrow(summary, "summary")?.0;
        *out_ref(out, "out")? = estimators::k_yz(s)?;
        Ok(())
    })
}

/// `(K_yz − θ) / (1 − θ)`; `CR_STATUS_VALIDATION_ERROR` for `θ = 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_alpha_opt(theta: f64, k_yz: f64, out: *mut f64) -> CrStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = estimators::alpha_opt(theta, k_yz)?;
        Ok(())
    })
}

/// Chain-ratio estimate `ȳ(x̄′/x̄)(aZ̄ + b)/(az̄′ + b)`.
///
/// # Safety
/// `means` must be readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_chain_estimate(
    means: *const CrSampleMeans,
    pop_mean_z: f64,
    a: f64,
    b: f64,
    out: *mut f64,
) -> CrStatus {
    guard(|| {
        let m: SampleMeans = (*borrow(means, "means")?).into();
        let out = out_ref(out, "out")?;
        *out = estimators::chain_estimate(&m, pop_mean_z, &AuxTransform::custom(a, b)?)?;
        Ok(())
    })
}

/// `α·t1 + (1 − α)·t(a, b)` on one sample.
///
/// # Safety
/// `means` must be readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_combined_estimate(
    means: *const CrSampleMeans,
    pop_mean_z: f64,
    a: f64,
    b: f64,
    alpha: f64,
    out: *mut f64,
) -> CrStatus {
    guard(|| {
        let m: SampleMeans = (*borrow(means, "means")?).into();
        let out = out_ref(out, "out")?;
        *out = estimators::combined_estimate(&m, pop_mean_z, &AuxTransform::custom(a, b)?, alpha)?;
        Ok(())
    })
}

// ----------------------------------------------------------------- analytic

/// First-order MSE of the combined estimator at `(θ, α)`.
///
/// # Safety
/// `summary` must be valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_mse_combined(
    summary: *const CrSummary,
    n_population: usize,
    n_first: usize,
    n_second: usize,
    theta: f64,
    alpha: f64,
    out: *mut f64,
) -> CrStatus {
    guard(|| {
        let s = &borrow(summary, "summary")?.0;
        let out = out_ref(out, "out")?;
        let f = design(n_population, n_first, n_second)?.factors();
        *out = mse::mse_combined(s, &f, theta, alpha);
        Ok(())
    })
}

/// Minimum first-order MSE of the combined estimator.
///
/// # Safety
/// `summary` must be valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_min_mse_combined(
    summary: *const CrSummary,
    n_population: usize,
    n_first: usize,
    n_second: usize,
    out: *mut f64,
) -> CrStatus {
    guard(|| {
        let s = &borrow(summary, "summary")?.0;
        let out = out_ref(out, "out")?;
        let f = design(n_population, n_first, n_second)?.factors();
        *out = mse::min_mse_combined(s, &f);
        Ok(())
    })
}

/// Opaque table of `(name, θ, MSE, PRE)` rows.
pub struct CrTable {
    names: Vec<CString>,
    rows: Vec<CrRow>,
}

/// One row of a table. `has_theta` / `has_pre` are 0 when the value is absent.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CrRow {
    pub theta: f64,
    pub has_theta: u8,
    pub mse: f64,
    pub pre: f64,
    pub has_pre: u8,
}

fn table_from(t: &EvaluationTable) -> CrTable {
    CrTable {
        names: t
            .rows
            .iter()
            .map(|r| CString::new(r.estimator.as_str()).expect("names have no NUL"))
            .collect(),
        rows: t
            .rows
            .iter()
            .map(|r| CrRow {
                theta: r.theta.unwrap_or(f64::NAN),
                has_theta: r.theta.is_some() as u8,
                mse: r.mse,
                pre: r.pre.unwrap_or(f64::NAN),
                has_pre: r.pre.is_some() as u8,
            })
            .collect(),
    }
}

/// Analytic table: ybar, rd, t1..t7 and the optimal combined estimator.
///
/// # Safety
/// `summary` must be valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_evaluate(
    summary: *const CrSummary,
    n_population: usize,
    n_first: usize,
    n_second: usize,
    out: *mut *mut CrTable,
) -> CrStatus {
    guard(|| {
        let s = &borrow(summary, "summary")?.0;
        let out = out_ref(out, "out")?;
        let t = mse::analytic_table(s, &design(n_population, n_first, n_second)?)?;
        *out = boxed(table_from(&t));
        Ok(())
    })
}

/// # Safety
/// `table` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cr_table_len(table: *const CrTable) -> usize {
    table.as_ref().map_or(0, |t| t.rows.len())
}

/// Estimator name of row `index`, or NULL when out of range. Owned by the table.
///
/// # Safety
/// `table` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cr_table_row_name(table: *const CrTable, index: usize) -> *const c_char {
    table
        .as_ref()
        .and_then(|t| t.names.get(index))
        .map_or(ptr::null(), |s| s.as_ptr())
}

/// # Safety
/// `table` must be valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_table_row(
    table: *const CrTable,
    index: usize,
    out: *mut CrRow,
) -> CrStatus {
    guard(|| {
        let t = borrow(table, "table")?;
        let out = out_ref(out, "out")?;
        *out = *t.rows.get(index).ok_or_else(|| {
            Failure(
                CrStatus::ValidationError,
                format!("row {index} out of range"),
            )
        })?;
        Ok(())
    })
}

/// # Safety
/// `table` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cr_table_free(table: *mut CrTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

// --------------------------------------------------------------- simulation

/// Empirical (or exact) moments of one estimator.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CrSimRecord {
    pub mean: f64,
    pub bias: f64,
    pub mse: f64,
    /// NaN when absent.
    pub pre: f64,
    /// NaN for exact results and single replications.
    pub mse_std_error: f64,
    pub rejected: u64,
}

/// Opaque simulation or enumeration result.
pub struct CrSimResult {
    names: Vec<CString>,
    records: Vec<CrSimRecord>,
    base_var: f64,
}

unsafe fn estimator_list(names: *const c_char) -> Result<Vec<EstimatorId>, Failure> {
    if names.is_null() {
        return Ok(EstimatorId::default_simulation_set());
    }
    let names = c_str(names, "estimators")?;
    Ok(names
        .split(',')
        .map(str::parse)
        .collect::<chainratio::Result<Vec<EstimatorId>>>()?)
}

/// Monte Carlo over `replications` two-phase samples with design
/// `(N, n_first, n_second)` where `N` is the population size.
/// `estimators` is a comma-separated name list, or NULL for the default set.
/// Deterministic for a given `(seed, replications)`.
///
/// # Safety
/// `pop` must be valid; `estimators` NULL or NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_simulate(
    pop: *const CrPopulation,
    n_first: usize,
    n_second: usize,
    estimators: *const c_char,
    replications: u64,
    seed: u64,
    out: *mut *mut CrSimResult,
) -> CrStatus {
    guard(|| {
        let pop = &borrow(pop, "population")?.0;
        let out = out_ref(out, "out")?;
        let ids = estimator_list(estimators)?;
        let d = design(pop.len(), n_first, n_second)?;
        let r = simulate::run_monte_carlo(pop, &d, &ids, &SimConfig::new(replications, seed))?;
        *out = boxed(CrSimResult {
            names: r
                .records
                .iter()
                .map(|x| CString::new(x.estimator.as_str()).expect("no NUL"))
                .collect(),
            records: r
                .records
                .iter()
                .map(|x| CrSimRecord {
                    mean: x.empirical_mean,
                    bias: x.empirical_bias,
                    mse: x.empirical_mse,
                    pre: x.empirical_pre.unwrap_or(f64::NAN),
                    mse_std_error: x.mse_std_error.unwrap_or(f64::NAN),
                    rejected: x.rejected_count,
                })
                .collect(),
            base_var: r.base_empirical_var,
        });
        Ok(())
    })
}

/// Exact design moments by enumerating every two-phase sample.
///
/// # Safety
/// As [`cr_simulate`].
#[no_mangle]
pub unsafe extern "C" fn cr_enumerate(
    pop: *const CrPopulation,
    n_first: usize,
    n_second: usize,
    estimators: *const c_char,
    out: *mut *mut CrSimResult,
) -> CrStatus {
    guard(|| {
        let pop = &borrow(pop, "population")?.0;
        let out = out_ref(out, "out")?;
        let ids = estimator_list(estimators)?;
        let d = design(pop.len(), n_first, n_second)?;
        let r = simulate::enumerate_exact(pop, &d, &ids, &EnumConfig::default())?;
        *out = boxed(CrSimResult {
            names: r
                .records
                .iter()
                .map(|x| CString::new(x.estimator.as_str()).expect("no NUL"))
                .collect(),
            records: r
                .records
                .iter()
                .map(|x| CrSimRecord {
                    mean: x.exact_mean,
                    bias: x.exact_bias,
                    mse: x.exact_mse,
                    pre: x.exact_pre.unwrap_or(f64::NAN),
                    mse_std_error: f64::NAN,
                    rejected: x.excluded_count,
                })
                .collect(),
            base_var: r.base_exact_var,
        });
        Ok(())
    })
}

/// # Safety
/// `result` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cr_sim_len(result: *const CrSimResult) -> usize {
    result.as_ref().map_or(0, |r| r.records.len())
}

/// Variance of ȳ (the PRE base), NaN for NULL.
///
/// # Safety
/// `result` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cr_sim_base_variance(result: *const CrSimResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.base_var)
}

/// # Safety
/// `result` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cr_sim_record_name(
    result: *const CrSimResult,
    index: usize,
) -> *const c_char {
    result
        .as_ref()
        .and_then(|r| r.names.get(index))
        .map_or(ptr::null(), |s| s.as_ptr())
}

/// # Safety
/// `result` must be valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_sim_record(
    result: *const CrSimResult,
    index: usize,
    out: *mut CrSimRecord,
) -> CrStatus {
    guard(|| {
        let r = borrow(result, "result")?;
        let out = out_ref(out, "out")?;
        *out = *r.records.get(index).ok_or_else(|| {
            Failure(
                CrStatus::ValidationError,
                format!("record {index} out of range"),
            )
        })?;
        Ok(())
    })
}

/// # Safety
/// `result` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cr_sim_free(result: *mut CrSimResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}
