#ifndef CROWDPERM_H
#define CROWDPERM_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CpScenario {
  CP_SCENARIO_EASY = 0,
  CP_SCENARIO_FEW_SMART = 1,
  CP_SCENARIO_ADVERSARIAL = 2,
  CP_SCENARIO_PERM_NOT_INT = 3,
  CP_SCENARIO_MINIMAX_LB = 4,
  CP_SCENARIO_SUPER_SPARSE = 5,
  CP_SCENARIO_GHOSH_HARD = 6,
  CP_SCENARIO_ZHANG_HARD = 7,
  CP_SCENARIO_MV_LOWER_BOUND = 8,
} CpScenario;

typedef enum CpStatus {
  CP_STATUS_OK = 0,
  CP_STATUS_NULL_POINTER = 1,
  CP_STATUS_INVALID_ARGUMENT = 2,
  CP_STATUS_DIMENSION_MISMATCH = 3,
  CP_STATUS_NOT_CONVERGED = 4,
  CP_STATUS_SIZE_CAP_EXCEEDED = 5,
  CP_STATUS_UNSATISFIABLE = 6,
  CP_STATUS_PANIC = 99,
} CpStatus;

/**
 * Opaque ground-truth instance.
 */
typedef struct CpInstance CpInstance;

/**
 * Opaque probability matrix.
 */
typedef struct CpProbabilityMatrix CpProbabilityMatrix;

/**
 * Opaque response matrix.
 */
typedef struct CpResponseMatrix CpResponseMatrix;

/**
 * Model-class membership flags.
 */
typedef struct CpClassReport {
  bool in_ds;
  bool in_int;
  bool in_perm;
} CpClassReport;

/**
 * Result of the windowing step.
 */
typedef struct CpWanInfo {
  size_t k_wan;
  size_t window_floor;
} CpWanInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *cp_last_error_message(void);

/**
 * Creates an `n x d` probability matrix from row-major `entries`.
 * Entries must be in `[0.5, 1]`, or `[0, 1]` when `allow_adversarial`.
 *
 * # Safety
 * `entries` must point to `n * d` readable doubles; `out` must be writable.
 */
enum CpStatus cp_probability_matrix_new(size_t n,
                                        size_t d,
                                        const double *entries,
                                        bool allow_adversarial,
                                        struct CpProbabilityMatrix **out);

/**
 * # Safety
 * `q` must be NULL or a handle from this library, not yet freed.
 */
void cp_probability_matrix_free(struct CpProbabilityMatrix *q);

/**
 * # Safety
 * `entries` must point to `n * d` readable bytes; `out` must be writable.
 */
enum CpStatus cp_response_matrix_new(size_t n,
                                     size_t d,
                                     const int8_t *entries,
                                     struct CpResponseMatrix **out);

/**
 * # Safety
 * `y` must be NULL or a handle from this library, not yet freed.
 */
void cp_response_matrix_free(struct CpResponseMatrix *y);

/**
 * # Safety
 * `y` must be a live handle; `n` and `d` must be writable.
 */
enum CpStatus cp_response_matrix_dims(const struct CpResponseMatrix *y, size_t *n, size_t *d);

/**
 * Copies the row-major entries of `y` into `buf` (`len` must be `n * d`).
 *
 * # Safety
 * `y` must be a live handle; `buf` must hold `len` writable bytes.
 */
enum CpStatus cp_response_matrix_copy(const struct CpResponseMatrix *y, int8_t *buf, size_t len);

/**
 * Ground truth from a probability matrix (copied), answers in `{-1, +1}`
 * and `p_obs ∈ (0, 1]`.
 *
 * # Safety
 * `q` must be a live handle; `truth` must hold `d` readable bytes.
 */
enum CpStatus cp_instance_new(const struct CpProbabilityMatrix *q,
                              const int8_t *truth,
                              size_t d,
                              double p_obs,
                              struct CpInstance **out);

/**
 * Builds a simulation scenario. `random_truth` draws answers from
 * `truth_seed`; otherwise they are all `+1` (all `-1` for the
 * majority-vote lower-bound construction).
 *
 * # Safety
 * `out` must be writable.
 */
enum CpStatus cp_scenario_build(enum CpScenario kind,
                                size_t n,
                                size_t d,
                                double p_obs,
                                bool random_truth,
                                uint64_t truth_seed,
                                struct CpInstance **out);

/**
 * # Safety
 * `inst` must be NULL or a handle from this library, not yet freed.
 */
void cp_instance_free(struct CpInstance *inst);

/**
 * Copies the true answers of `inst` into `buf` (`len` must be `d`).
 *
 * # Safety
 * `inst` must be a live handle; `buf` must hold `len` writable bytes.
 */
enum CpStatus cp_instance_truth(const struct CpInstance *inst, int8_t *buf, size_t len);

/**
 * New handle holding a copy of the instance's probability matrix.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum CpStatus cp_instance_matrix(const struct CpInstance *inst, struct CpProbabilityMatrix **out);

/**
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum CpStatus cp_sample_responses(const struct CpInstance *inst,
                                  uint64_t seed,
                                  struct CpResponseMatrix **out);

/**
 * # Safety
 * `y` must be a live handle; `out` must be writable.
 */
enum CpStatus cp_estimate_pobs(const struct CpResponseMatrix *y, double *out);

/**
 * # Safety
 * `q` must be a live handle; `out` must be writable.
 */
enum CpStatus cp_classify_matrix(const struct CpProbabilityMatrix *q,
                                 double tol,
                                 struct CpClassReport *out);

/**
 * # Safety
 * `y` must be a live handle; `answers` must hold `len == d` writable bytes.
 */
enum CpStatus cp_majority_vote(const struct CpResponseMatrix *y, int8_t *answers, size_t len);

/**
 * WAN with a caller-supplied worker ordering (`order[k]` is the worker at
 * rank `k`, best first).
 *
 * # Safety
 * `y` must be a live handle; `order` must hold `n` readable values;
 * `answers` must hold `len == d` writable bytes; `info` may be NULL.
 */
enum CpStatus cp_wan(const struct CpResponseMatrix *y,
                     const size_t *order,
                     size_t n,
                     double p_obs,
                     int8_t *answers,
                     size_t len,
                     struct CpWanInfo *info);

/**
 * # Safety
 * `y` must be a live handle; `answers` must hold `len == d` writable bytes.
 */
enum CpStatus cp_obi_wan(const struct CpResponseMatrix *y,
                         double p_obs,
                         uint64_t seed,
                         int8_t *answers,
                         size_t len);

/**
 * Top eigenvector of `Y Yᵀ` (sign resolved) into `vector` (`len == n`).
 * On `NOT_CONVERGED` the last iterate is still written.
 *
 * # Safety
 * `y` must be a live handle; `vector` must hold `len` writable doubles;
 * `eigenvalue` may be NULL.
 */
enum CpStatus cp_top_eigenvector(const struct CpResponseMatrix *y,
                                 double tol,
                                 size_t max_iter,
                                 double *vector,
                                 size_t len,
                                 double *eigenvalue);

/**
 * # Safety
 * `a` and `b` must each hold `len` readable bytes; `out` must be writable.
 */
enum CpStatus cp_hamming(const int8_t *a, const int8_t *b, size_t len, double *out);

/**
 * # Safety
 * `q` must be a live handle; `a` and `b` must each hold `len` readable
 * bytes; `out` must be writable.
 */
enum CpStatus cp_qstar_loss(const struct CpProbabilityMatrix *q,
                            const int8_t *a,
                            const int8_t *b,
                            size_t len,
                            double *out);

/**
 * # Safety
 * `w` must hold `len` readable doubles; `out` must be writable.
 */
enum CpStatus cp_collective_intelligence(const double *w, size_t len, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CROWDPERM_H */
