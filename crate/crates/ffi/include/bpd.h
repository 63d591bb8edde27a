#ifndef BPD_H
#define BPD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every call.
typedef enum BpdStatus {
  BPD_STATUS_OK = 0,
  BPD_STATUS_INVALID_PARAMETER = 1,
  BPD_STATUS_TRIVIAL_REGION = 2,
  BPD_STATUS_NON_TRIVIAL_REGION = 3,
  BPD_STATUS_INFEASIBLE_NU = 4,
  // A root or denominator condition failed inside a numeric routine.
  BPD_STATUS_NUMERIC = 5,
  BPD_STATUS_INFEASIBLE = 6,
  BPD_STATUS_INVALID_GRID = 7,
  BPD_STATUS_OUT_OF_RANGE = 8,
  BPD_STATUS_NULL_POINTER = 9,
  // An internal panic was caught.
  BPD_STATUS_INTERNAL = 10,
} BpdStatus;

// Scheme selector, passed as an `int32_t`.
typedef enum BpdScheme {
  BPD_SCHEME_SEPARATE = 0,
  BPD_SCHEME_SCHEME_A = 1,
  BPD_SCHEME_SCHEME_B = 2,
  BPD_SCHEME_SCHEME_C = 3,
  BPD_SCHEME_OUTER_BOUND = 4,
} BpdScheme;

// Ratio-map comparison selector, passed as an `int32_t`.
typedef enum BpdComparison {
  BPD_COMPARISON_SEP_VS_OUTER = 0,
  BPD_COMPARISON_C_VS_SEP = 1,
} BpdComparison;

// Opaque problem instance: source, channel and target distortions.
typedef struct BpdProblem BpdProblem;

// Opaque ratio map.
typedef struct BpdRatioMap BpdRatioMap;

typedef struct BpdPowerSolution {
  double power;
  // Optimal nu for separate coding; NaN when `has_optimizer` is false.
  double optimizer;
  bool has_optimizer;
  double eta_bar;
  // Trivial-region common-message-only figure.
  bool degenerate;
} BpdPowerSolution;

typedef struct BpdRatioCell {
  double d1;
  double d2;
  double p_sep;
  double p_outer;
  double p_a;
  double p_b;
  double p_c;
  double ratio_db;
  bool trivial;
  bool low_distortion;
  // NaN in the trivial region.
  double nu_opt;
  double eta_bar;
} BpdRatioCell;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *bpd_last_error(void);

// Library version as a static NUL-terminated string.
const char *bpd_version(void);

// Validates the parameters and allocates a problem handle into `*out`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one pointer.
enum BpdStatus bpd_problem_new(double rho,
                               double n1,
                               double n2,
                               double kappa,
                               double d1,
                               double d2,
                               struct BpdProblem **out);

// Releases a handle from [`bpd_problem_new`]. Null is ignored.
//
// # Safety
// `p` must be null or a live handle not freed before.
void bpd_problem_free(struct BpdProblem *p);

// Writes the region flags of the instance's distortion pair.
//
// # Safety
// `p` must be a live handle; the out pointers must be writable.
enum BpdStatus bpd_problem_region(const struct BpdProblem *p, bool *trivial, bool *low_distortion);

// Writes the admissible nu interval.
//
// # Safety
// `p` must be a live handle; the out pointers must be writable.
enum BpdStatus bpd_problem_nu_interval(const struct BpdProblem *p, double *lo, double *hi);

// Minimum power of `scheme` (a [`BpdScheme`] value).
//
// # Safety
// `p` must be a live handle; `out` must be writable.
enum BpdStatus bpd_problem_min_power(const struct BpdProblem *p,
                                     int32_t scheme,
                                     struct BpdPowerSolution *out);

// Successive-coding rates (bits per source sample) at `nu`.
//
// # Safety
// `p` must be a live handle; the out pointers must be writable.
enum BpdStatus bpd_problem_successive_rates(const struct BpdProblem *p,
                                            double nu,
                                            double *r1,
                                            double *r2);

// Broadcast power and private fraction needed at `nu`.
//
// # Safety
// `p` must be a live handle; the out pointers must be writable.
enum BpdStatus bpd_problem_power_of_nu(const struct BpdProblem *p,
                                       double nu,
                                       double *power,
                                       double *eta_bar);

// Minimum broadcast power for the rate pair `(r1, r2)`.
//
// # Safety
// The out pointers must be writable.
enum BpdStatus bpd_min_power_for_rates(double n1,
                                       double n2,
                                       double kappa,
                                       double r1,
                                       double r2,
                                       double *power,
                                       double *eta_bar);

// Upper bound on `P_sep / P_outer` over the low-distortion region.
//
// # Safety
// `out` must be writable.
enum BpdStatus bpd_theorem2_bound(double rho, double kappa, double *out);

// Limit of `P_C / P_sep` as `D2 -> 0` at `D1 = 1 - rho^2`.
//
// # Safety
// `out` must be writable.
enum BpdStatus bpd_theorem3_limit(double rho, double kappa, double *out);

// Computes a power-ratio map over linear `d1 x d2` grids. `compare` is a
// [`BpdComparison`] value; `workers == 0` uses every core.
//
// # Safety
// `out` must be writable.
enum BpdStatus bpd_ratio_map_new(double rho,
                                 double n1,
                                 double n2,
                                 double kappa,
                                 double d1_lo,
                                 double d1_hi,
                                 size_t d1_count,
                                 double d2_lo,
                                 double d2_hi,
                                 size_t d2_count,
                                 int32_t compare,
                                 size_t workers,
                                 struct BpdRatioMap **out);

// Number of cells (row-major, `d1` outer).
//
// # Safety
// `m` must be null or a live handle.
size_t bpd_ratio_map_len(const struct BpdRatioMap *m);

// Copies cell `index` into `out`. A cell whose evaluation failed returns
// its error status and leaves `out` holding only `d1`, `d2` and NaNs.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum BpdStatus bpd_ratio_map_cell(const struct BpdRatioMap *m,
                                  size_t index,
                                  struct BpdRatioCell *out);

// Releases a map from [`bpd_ratio_map_new`]. Null is ignored.
//
// # Safety
// `m` must be null or a live handle not freed before.
void bpd_ratio_map_free(struct BpdRatioMap *m);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BPD_H */
