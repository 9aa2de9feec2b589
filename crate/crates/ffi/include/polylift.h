#ifndef POLYLIFT_H
#define POLYLIFT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PolyliftStatus {
  POLYLIFT_STATUS_OK = 0,
  POLYLIFT_STATUS_NULL_POINTER = 1,
  POLYLIFT_STATUS_INVALID_ARGUMENT = 2,
  POLYLIFT_STATUS_VALIDATION = 3,
  POLYLIFT_STATUS_NUMERICAL = 4,
  POLYLIFT_STATUS_BUFFER_TOO_SMALL = 5,
  POLYLIFT_STATUS_PANIC = 6,
} PolyliftStatus;

typedef enum PolyliftOutcome {
  POLYLIFT_OUTCOME_CERTIFIED_YES = 0,
  POLYLIFT_OUTCOME_CERTIFIED_NO = 1,
  POLYLIFT_OUTCOME_INCONCLUSIVE = 2,
} PolyliftOutcome;

typedef enum PolyliftFeasibility {
  POLYLIFT_FEASIBILITY_FEASIBLE = 0,
  POLYLIFT_FEASIBILITY_INFEASIBLE = 1,
  POLYLIFT_FEASIBILITY_UNKNOWN = 2,
} PolyliftFeasibility;

/**
 * Opaque interpolation problem.
 */
typedef struct PolyliftProblem PolyliftProblem;

/**
 * Opaque owned C string.
 */
typedef struct PolyliftString PolyliftString;

/**
 * Run parameters. `grid_points == 0` selects the dimension-dependent default.
 */
typedef struct PolyliftConfig {
  size_t grid_points;
  uint32_t degree;
  uint64_t seed;
  size_t budget_iters;
  double yes_tol;
  double no_margin;
} PolyliftConfig;

typedef struct PolyliftVerdict {
  enum PolyliftOutcome outcome;
  double lower;
  double upper;
  double operator_norm;
  double pick_min_eigenvalue;
} PolyliftVerdict;

typedef struct PolyliftAglerResult {
  enum PolyliftFeasibility feasibility;
  double residual;
  double final_gap;
  size_t iterations;
} PolyliftAglerResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Defaults matching the command-line tool.
 */
struct PolyliftConfig polylift_config_default(void);

/**
 * Message of the last failed call on this thread, or NULL. Valid until the next call.
 */
const char *polylift_last_error_message(void);

/**
 * Builds a problem from `m` nodes in `n` variables. Node coordinates are row-major
 * (`nodes_re[i * n + j]` is the real part of coordinate `j` of node `i`).
 *
 * # Safety
 * The coordinate arrays must hold `m * n` values, the target arrays `m`, and `out` must be writable.
 */
enum PolyliftStatus polylift_problem_new(size_t n,
                                         size_t m,
                                         const double *nodes_re,
                                         const double *nodes_im,
                                         const double *targets_re,
                                         const double *targets_im,
                                         struct PolyliftProblem **out);

/**
 * Parses a problem from its JSON form (`{"n", "nodes", "targets"}`).
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum PolyliftStatus polylift_problem_from_json(const char *json, struct PolyliftProblem **out);

/**
 * # Safety
 * `problem` must come from this library and not be used afterwards. NULL is ignored.
 */
void polylift_problem_free(struct PolyliftProblem *problem);

/**
 * Number of nodes, or 0 for NULL.
 *
 * # Safety
 * `problem` must be NULL or a live handle.
 */
size_t polylift_problem_len(const struct PolyliftProblem *problem);

/**
 * Smallest eigenvalue of the Pick matrix and whether it is PSD within tolerance.
 *
 * # Safety
 * `problem` must be a live handle; the outputs must be writable.
 */
enum PolyliftStatus polylift_pick(const struct PolyliftProblem *problem,
                                  double *min_eigenvalue,
                                  bool *psd);

/**
 * Coefficients `c` of the minimal-norm interpolant `Σ c_j 𝕊(·, z_j)`; arrays hold `capacity` values.
 *
 * # Safety
 * `problem` must be a live handle; the coefficient arrays must hold `capacity` writable values.
 */
enum PolyliftStatus polylift_solve_psi(const struct PolyliftProblem *problem,
                                       double *coeffs_re,
                                       double *coeffs_im,
                                       size_t capacity);

/**
 * Schur interpolation verdict. `config` may be NULL for defaults.
 *
 * # Safety
 * `problem` must be a live handle, `config` NULL or readable, `out` writable.
 */
enum PolyliftStatus polylift_interpolation_verdict(const struct PolyliftProblem *problem,
                                                   const struct PolyliftConfig *config,
                                                   struct PolyliftVerdict *out);

/**
 * Agler decomposition feasibility for two-variable data. `residual` is NaN without a witness.
 *
 * # Safety
 * `problem` must be a live handle and `out` writable.
 */
enum PolyliftStatus polylift_agler(const struct PolyliftProblem *problem,
                                   size_t max_iters,
                                   double psd_tol,
                                   struct PolyliftAglerResult *out);

/**
 * Runs the command-line tool on `argv` (without the program name) and returns its JSON report
 * and exit code. The report is freed with [`polylift_string_free`].
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings; the outputs must be writable.
 */
enum PolyliftStatus polylift_run(size_t argc,
                                 const char *const *argv,
                                 struct PolyliftString **report,
                                 int32_t *exit_code);

/**
 * Borrowed view of the text, valid until the handle is freed.
 *
 * # Safety
 * `s` must be NULL or a live handle.
 */
const char *polylift_string_ptr(const struct PolyliftString *s);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. NULL is ignored.
 */
void polylift_string_free(struct PolyliftString *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYLIFT_H */
