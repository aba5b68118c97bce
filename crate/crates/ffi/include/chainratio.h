#ifndef CHAINRATIO_H
#define CHAINRATIO_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. 1..=3 match the CLI exit codes.
 */
typedef enum CrStatus {
  CR_STATUS_OK = 0,
  CR_STATUS_VALIDATION_ERROR = 1,
  CR_STATUS_DATA_ERROR = 2,
  CR_STATUS_NUMERIC_GUARD = 3,
  CR_STATUS_NULL_POINTER = 4,
  CR_STATUS_INVALID_UTF8 = 5,
  CR_STATUS_PANIC = 6,
} CrStatus;

/**
 * Opaque finite population.
 */
typedef struct CrPopulation CrPopulation;

/**
 * Opaque simulation or enumeration result.
 */
typedef struct CrSimResult CrSimResult;

/**
 * Opaque population summary.
 */
typedef struct CrSummary CrSummary;

/**
 * Opaque table of `(name, θ, MSE, PRE)` rows.
 */
typedef struct CrTable CrTable;

/**
 * Every field of a population summary.
 */
typedef struct CrSummaryValues {
  size_t n_population;
  double mean_y;
  double mean_x;
  double mean_z;
  double s2_y;
  double s2_x;
  double s2_z;
  double s_xy;
  double s_xz;
  double s_yz;
  double cv_y;
  double cv_x;
  double cv_z;
  double rho_xy;
  double rho_xz;
  double rho_yz;
  double sigma_z;
  double beta1_z;
  double beta2_z;
} CrSummaryValues;

typedef struct CrFactors {
  double f1;
  double f2;
  double f3;
} CrFactors;

/**
 * The four sample means an estimator needs.
 */
typedef struct CrSampleMeans {
  double mean_y_second;
  double mean_x_second;
  double mean_x_first;
  double mean_z_first;
} CrSampleMeans;

/**
 * One row of a table. `has_theta` / `has_pre` are 0 when the value is absent.
 */
typedef struct CrRow {
  double theta;
  uint8_t has_theta;
  double mse;
  double pre;
  uint8_t has_pre;
} CrRow;

/**
 * Empirical (or exact) moments of one estimator.
 */
typedef struct CrSimRecord {
  double mean;
  double bias;
  double mse;
  /**
   * NaN when absent.
   */
  double pre;
  /**
   * NaN for exact results and single replications.
   */
  double mse_std_error;
  uint64_t rejected;
} CrSimRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. Valid until
 * the next failing call on the same thread.
 */
const char *cr_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cr_version(void);

/**
 * Loads a `key = value` summary file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum CrStatus cr_summary_load(const char *path, struct CrSummary **out);

/**
 * Parses summary-file text held in memory.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum CrStatus cr_summary_parse(const char *text, struct CrSummary **out);

/**
 * The bundled head-measurement summary.
 *
 * # Safety
 * `out` must be writable.
 */
enum CrStatus cr_summary_anderson(struct CrSummary **out);

/**
 * # Safety
 * `summary` must be valid; `out` must be writable.
 */
enum CrStatus cr_summary_values(const struct CrSummary *summary, struct CrSummaryValues *out);

/**
 * # Safety
 * `summary` must be NULL or a handle not yet freed.
 */
void cr_summary_free(struct CrSummary *summary);

/**
 * Loads a `y,x,z` CSV file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum CrStatus cr_population_load_csv(const char *path, struct CrPopulation **out);

/**
 * Builds a population from three arrays of length `len`.
 *
 * # Safety
 * `y`, `x` and `z` must each point to `len` readable doubles.
 */
enum CrStatus cr_population_from_arrays(const double *y,
                                        const double *x,
                                        const double *z,
                                        size_t len,
                                        struct CrPopulation **out);

/**
 * Number of units, or 0 for NULL.
 *
 * # Safety
 * `pop` must be NULL or valid.
 */
size_t cr_population_len(const struct CrPopulation *pop);

/**
 * # Safety
 * `pop` must be valid; `out` must be writable.
 */
enum CrStatus cr_population_summarize(const struct CrPopulation *pop, struct CrSummary **out);

/**
 * # Safety
 * `pop` must be NULL or a handle not yet freed.
 */
void cr_population_free(struct CrPopulation *pop);

/**
 * Variance factors of the design `(N, n', n)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CrStatus cr_design_factors(size_t n_population,
                                size_t n_first,
                                size_t n_second,
                                struct CrFactors *out);

/**
 * `(a, b)` of chain member `t_index` (1..=7) under `summary`.
 *
 * # Safety
 * `summary` must be valid; `a` and `b` writable.
 */
enum CrStatus cr_transform(const struct CrSummary *summary, uint32_t t_index, double *a, double *b);

/**
 * `θ = a·Z̄ / (a·Z̄ + b)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CrStatus cr_theta(double a, double b, double mean_z, double *out);

/**
 * # Safety
 * `summary` must be valid; `out` writable.
 */
enum CrStatus cr_k_yz(const struct CrSummary *summary, double *out);

/**
 * `(K_yz − θ) / (1 − θ)`; `CR_STATUS_VALIDATION_ERROR` for `θ = 1`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CrStatus cr_alpha_opt(double theta, double k_yz, double *out);

/**
 * Chain-ratio estimate `ȳ(x̄′/x̄)(aZ̄ + b)/(az̄′ + b)`.
 *
 * # Safety
 * `means` must be readable; `out` writable.
 */
enum CrStatus cr_chain_estimate(const struct CrSampleMeans *means,
                                double pop_mean_z,
                                double a,
                                double b,
                                double *out);

/**
 * `α·t1 + (1 − α)·t(a, b)` on one sample.
 *
 * # Safety
 * `means` must be readable; `out` writable.
 */
enum CrStatus cr_combined_estimate(const struct CrSampleMeans *means,
                                   double pop_mean_z,
                                   double a,
                                   double b,
                                   double alpha,
                                   double *out);

/**
 * First-order MSE of the combined estimator at `(θ, α)`.
 *
 * # Safety
 * `summary` must be valid; `out` writable.
 */
enum CrStatus cr_mse_combined(const struct CrSummary *summary,
                              size_t n_population,
                              size_t n_first,
                              size_t n_second,
                              double theta,
                              double alpha,
                              double *out);

/**
 * Minimum first-order MSE of the combined estimator.
 *
 * # Safety
 * `summary` must be valid; `out` writable.
 */
enum CrStatus cr_min_mse_combined(const struct CrSummary *summary,
                                  size_t n_population,
                                  size_t n_first,
                                  size_t n_second,
                                  double *out);

/**
 * Analytic table: ybar, rd, t1..t7 and the optimal combined estimator.
 *
 * # Safety
 * `summary` must be valid; `out` writable.
 */
enum CrStatus cr_evaluate(const struct CrSummary *summary,
                          size_t n_population,
                          size_t n_first,
                          size_t n_second,
                          struct CrTable **out);

/**
 * # Safety
 * `table` must be NULL or valid.
 */
size_t cr_table_len(const struct CrTable *table);

/**
 * Estimator name of row `index`, or NULL when out of range. Owned by the table.
 *
 * # Safety
 * `table` must be NULL or valid.
 */
const char *cr_table_row_name(const struct CrTable *table, size_t index);

/**
 * # Safety
 * `table` must be valid; `out` writable.
 */
enum CrStatus cr_table_row(const struct CrTable *table, size_t index, struct CrRow *out);

/**
 * # Safety
 * `table` must be NULL or a handle not yet freed.
 */
void cr_table_free(struct CrTable *table);

/**
 * Monte Carlo over `replications` two-phase samples with design
 * `(N, n_first, n_second)` where `N` is the population size.
 * `estimators` is a comma-separated name list, or NULL for the default set.
 * Deterministic for a given `(seed, replications)`.
 *
 * # Safety
 * `pop` must be valid; `estimators` NULL or NUL-terminated; `out` writable.
 */
enum CrStatus cr_simulate(const struct CrPopulation *pop,
                          size_t n_first,
                          size_t n_second,
                          const char *estimators,
                          uint64_t replications,
                          uint64_t seed,
                          struct CrSimResult **out);

/**
 * Exact design moments by enumerating every two-phase sample.
 *
 * # Safety
 * As [`cr_simulate`].
 */
enum CrStatus cr_enumerate(const struct CrPopulation *pop,
                           size_t n_first,
                           size_t n_second,
                           const char *estimators,
                           struct CrSimResult **out);

/**
 * # Safety
 * `result` must be NULL or valid.
 */
size_t cr_sim_len(const struct CrSimResult *result);

/**
 * Variance of ȳ (the PRE base), NaN for NULL.
 *
 * # Safety
 * `result` must be NULL or valid.
 */
double cr_sim_base_variance(const struct CrSimResult *result);

/**
 * # Safety
 * `result` must be NULL or valid.
 */
const char *cr_sim_record_name(const struct CrSimResult *result, size_t index);

/**
 * # Safety
 * `result` must be valid; `out` writable.
 */
enum CrStatus cr_sim_record(const struct CrSimResult *result,
                            size_t index,
                            struct CrSimRecord *out);

/**
 * # Safety
 * `result` must be NULL or a handle not yet freed.
 */
void cr_sim_free(struct CrSimResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHAINRATIO_H */
