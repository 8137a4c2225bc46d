/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef ROBUST_MEDIAN_H
#define ROBUST_MEDIAN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RmStatus {
  RM_STATUS_OK = 0,
  RM_STATUS_NULL_POINTER = 1,
  // An argument is outside its mathematical domain.
  RM_STATUS_DOMAIN = 2,
  // The data are unusable (empty, non-finite, too short).
  RM_STATUS_DATA = 3,
  // An internal error was caught at the boundary.
  RM_STATUS_PANIC = 4,
} RmStatus;

typedef enum RmToleranceKind {
  RM_TOLERANCE_KIND_NOT_SIGNIFICANT_EVEN_CLEAN = 0,
  RM_TOLERANCE_KIND_VALUE = 1,
  RM_TOLERANCE_KIND_CAPPED_AT_HALF = 2,
} RmToleranceKind;

typedef enum RmRule {
  // `k` whose worst-case level is closest to the target.
  RM_RULE_NEAREST = 0,
  // Largest `k` whose worst-case level does not exceed the target.
  RM_RULE_CONSERVATIVE = 1,
} RmRule;

typedef enum RmFamily {
  RM_FAMILY_NORMAL = 0,
  RM_FAMILY_LAPLACE = 1,
  RM_FAMILY_CAUCHY = 2,
  RM_FAMILY_LOGISTIC = 3,
  RM_FAMILY_UNIFORM = 4,
} RmFamily;

// Opaque design handle.
typedef struct RmDesign RmDesign;

// Opaque sample handle.
typedef struct RmSample RmSample;

typedef struct RmDesignInfo {
  uint64_t n;
  uint64_t k;
  double alpha_target;
  double alpha_achieved;
  double eps;
  double min_coverage;
  size_t warning_count;
} RmDesignInfo;

// Half-open interval `lower <= theta < upper`.
typedef struct RmInterval {
  double lower;
  double upper;
  uint64_t k;
  double min_coverage;
} RmInterval;

typedef struct RmTolerance {
  enum RmToleranceKind kind;
  // The tolerance when `kind` is `Value`, NaN otherwise.
  double tau;
} RmTolerance;

typedef struct RmTestOutcome {
  uint64_t statistic;
  uint64_t r_n;
  bool reject;
  double alpha_achieved;
  size_t ties_at_theta0;
  struct RmTolerance tolerance;
} RmTestOutcome;

// Symmetric target distribution; `scale` is sigma, b, gamma, s or the half-width.
typedef struct RmDistribution {
  // An `RmFamily` value.
  uint32_t family;
  double location;
  double scale;
} RmDistribution;

// A length that may be infinite; `value` is +inf when unbounded.
typedef struct RmExtent {
  bool bounded;
  double value;
} RmExtent;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread. The pointer stays valid
// until the next failing call on the same thread.
const char *rm_last_error_message(void);

// Copies `len` values into a new sample.
//
// # Safety
// `values` must point to `len` readable doubles; `out` must be writable.
enum RmStatus rm_sample_new(const double *values, size_t len, struct RmSample **out);

// # Safety
// `sample` must be null or a handle from [`rm_sample_new`] not yet freed.
void rm_sample_free(struct RmSample *sample);

// Number of values, or 0 for a null handle.
//
// # Safety
// `sample` must be null or a live handle.
size_t rm_sample_len(const struct RmSample *sample);

// Selects `k` for sample size `n`, target level `alpha` and design
// contamination `eps`; `rule` is an `RmRule` value.
//
// # Safety
// `out` must be writable.
enum RmStatus rm_design_select(uint64_t n,
                               double alpha,
                               double eps,
                               uint32_t rule,
                               struct RmDesign **out);

// A design with a caller-chosen `k`.
//
// # Safety
// `out` must be writable.
enum RmStatus rm_design_with_k(uint64_t n,
                               double alpha,
                               double eps,
                               uint64_t k,
                               struct RmDesign **out);

// # Safety
// `design` must be null or a handle from this library not yet freed.
void rm_design_free(struct RmDesign *design);

// # Safety
// `design` must be a live handle; `out` must be writable.
enum RmStatus rm_design_info(const struct RmDesign *design, struct RmDesignInfo *out);

// # Safety
// Handles must be live; `out` must be writable.
enum RmStatus rm_build_interval(const struct RmSample *sample,
                                const struct RmDesign *design,
                                struct RmInterval *out);

// # Safety
// Handles must be live; `out` must be writable.
enum RmStatus rm_sign_test(const struct RmSample *sample,
                           double theta0,
                           const struct RmDesign *design,
                           struct RmTestOutcome *out);

// Worst-case two-sided level of the sign test with cutoff `k`.
//
// # Safety
// `out` must be writable.
enum RmStatus rm_alpha_star(uint64_t n, uint64_t k, double eps, double *out);

// # Safety
// `out` must be writable.
enum RmStatus rm_min_coverage(uint64_t n, uint64_t k, double eps, double *out);

// # Safety
// `out` must be writable.
enum RmStatus rm_contamination_tolerance(uint64_t n,
                                         uint64_t t,
                                         double alpha,
                                         struct RmTolerance *out);

// Maximum asymptotic length of the interval designed for `eps` when a
// fraction `delta` of the data is contaminated.
//
// # Safety
// `out` must be writable.
enum RmStatus rm_max_asymptotic_length(struct RmDistribution dist,
                                       double eps,
                                       double delta,
                                       struct RmExtent *out);

// Library version as a static NUL-terminated string.
const char *rm_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROBUST_MEDIAN_H */
