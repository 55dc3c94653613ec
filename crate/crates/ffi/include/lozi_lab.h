#ifndef LOZI_LAB_H
#define LOZI_LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LoziBranch {
  LOZI_BRANCH_U_PLUS = 0,
  LOZI_BRANCH_U_MINUS = 1,
} LoziBranch;

typedef enum LoziRegime {
  LOZI_REGIME_R_CANDIDATE = 0,
  LOZI_REGIME_FRAK_R_MINUS_R_CANDIDATE = 1,
  LOZI_REGIME_FINITE_CROSSINGS = 2,
  LOZI_REGIME_POSITIVE_ENTROPY_SIGNAL = 3,
  LOZI_REGIME_OUT_OF_SCOPE = 4,
  LOZI_REGIME_UNKNOWN = 5,
} LoziRegime;

typedef enum LoziStatus {
  LOZI_STATUS_OK = 0,
  LOZI_STATUS_NULL_ARGUMENT = 1,
  LOZI_STATUS_INVALID_UTF8 = 2,
  LOZI_STATUS_INVALID_PARAMETERS = 3,
  LOZI_STATUS_PRECONDITION = 4,
  LOZI_STATUS_DEGENERATE = 5,
  LOZI_STATUS_BUDGET_EXHAUSTED = 6,
  LOZI_STATUS_DEPTH_INSUFFICIENT = 7,
  LOZI_STATUS_INCONSISTENCY = 8,
  LOZI_STATUS_NOT_SIMPLE = 9,
  LOZI_STATUS_NUMERIC = 10,
  LOZI_STATUS_GEOMETRY = 11,
  LOZI_STATUS_CONFIG = 12,
  LOZI_STATUS_IO = 13,
  LOZI_STATUS_BUFFER_TOO_SMALL = 14,
  LOZI_STATUS_PANIC = 15,
} LoziStatus;

// Computed unstable manifold of the fixed point `X`.
typedef struct LoziManifold LoziManifold;

// Map parameters `(a, b)` and arithmetic mode.
typedef struct LoziParams LoziParams;

// Classification of one parameter pair.
typedef struct LoziVerdict LoziVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL.
// The pointer stays valid until the next call on the same thread.
const char *lozi_last_error_message(void);

// Static NUL-terminated name of a regime.
const char *lozi_regime_name(enum LoziRegime r);

// Parses decimal or fraction text for `a` and `b`. `exact` selects exact
// arithmetic; otherwise `precision_bits` (at least 53) is used.
//
// # Safety
// `a` and `b` are NUL-terminated strings, `out_params` is writable.
enum LoziStatus lozi_params_new(const char *a,
                                const char *b,
                                bool exact,
                                uint32_t precision_bits,
                                struct LoziParams **out_params);

// # Safety
// `p` is NULL or came from `lozi_params_new` and was not freed.
void lozi_params_free(struct LoziParams *p);

// Whether `(a, b)` is in the standard region where the manifold tools apply.
//
// # Safety
// `p` is a live handle, `standard` is writable.
enum LoziStatus lozi_params_is_standard(const struct LoziParams *p, bool *standard);

// Fixed point `X` as `xy[0..2]`.
//
// # Safety
// `p` is a live handle, `xy` has room for 2 doubles.
enum LoziStatus lozi_params_fixed_point(const struct LoziParams *p, double *xy);

// Period-two orbit `P`, `P′` as `xy[0..4]`.
//
// # Safety
// `p` is a live handle, `xy` has room for 4 doubles.
enum LoziStatus lozi_params_period_two(const struct LoziParams *p, double *xy);

// Unstable manifold of `X` to `depth` arcs per branch. `max_vertices` of 0
// keeps the default budget.
//
// # Safety
// `p` is a live handle, `out_manifold` is writable.
enum LoziStatus lozi_unstable_manifold_new(const struct LoziParams *p,
                                           size_t depth,
                                           size_t max_vertices,
                                           struct LoziManifold **out_manifold);

// # Safety
// `m` is NULL or a live manifold handle.
void lozi_manifold_free(struct LoziManifold *m);

// Number of vertices on one branch, starting at `X`.
//
// # Safety
// `m` is a live handle, `count` is writable.
enum LoziStatus lozi_manifold_vertex_count(const struct LoziManifold *m,
                                           enum LoziBranch b,
                                           size_t *count);

// Writes the branch vertices as interleaved `x, y` doubles. `capacity` is
// in points; `written` receives the number of points.
//
// # Safety
// `m` is a live handle, `xy` has room for `2 * capacity` doubles.
enum LoziStatus lozi_manifold_vertices(const struct LoziManifold *m,
                                       enum LoziBranch b,
                                       double *xy,
                                       size_t capacity,
                                       size_t *written);

// Runs the classifier with default budgets.
//
// # Safety
// `p` is a live handle, `out_verdict` is writable.
enum LoziStatus lozi_classify(const struct LoziParams *p, struct LoziVerdict **out_verdict);

// # Safety
// `v` is NULL or a live verdict handle.
void lozi_verdict_free(struct LoziVerdict *v);

// # Safety
// `v` is a live handle, `regime` is writable.
enum LoziStatus lozi_verdict_regime(const struct LoziVerdict *v, enum LoziRegime *regime);

// Full verdict as JSON. Call with `buf = NULL` to learn the size through
// `needed` (which includes the NUL).
//
// # Safety
// `v` is a live handle; `buf` is NULL or has room for `len` bytes.
enum LoziStatus lozi_verdict_json(const struct LoziVerdict *v,
                                  char *buf,
                                  size_t len,
                                  size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOZI_LAB_H */
