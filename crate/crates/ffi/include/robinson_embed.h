#ifndef ROBINSON_EMBED_H
#define ROBINSON_EMBED_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

/**
 * Decision procedure for [`rbe_solve`].
 */
typedef enum RbeMethod {
  RBE_METHOD_AUTO = 0,
  RBE_METHOD_RATIO = 1,
  RBE_METHOD_GENERAL = 2,
} RbeMethod;

/**
 * Result code of every fallible call. Values 0 to 4 match the
 * command-line exit codes.
 */
typedef enum RbeStatus {
  RBE_STATUS_OK = 0,
  RBE_STATUS_INVALID_MATRIX = 1,
  RBE_STATUS_USAGE = 2,
  RBE_STATUS_INFEASIBLE = 3,
  RBE_STATUS_INTERNAL = 4,
  RBE_STATUS_NULL_POINTER = 5,
  RBE_STATUS_PANIC = 6,
} RbeStatus;

/**
 * A validated Robinson matrix.
 */
typedef struct RbeMatrix RbeMatrix;

/**
 * The result of a solve: thresholds and embedding, or a certificate.
 */
typedef struct RbeOutcome RbeOutcome;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *rbe_last_error(void);

/**
 * Library version as a static string.
 */
const char *rbe_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void rbe_string_free(char *s);

/**
 * Parses a matrix in the text format (`n k` header, then `n` rows).
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RbeStatus rbe_matrix_parse(const char *text, struct RbeMatrix **out);

/**
 * Builds a matrix from `n * n` row-major levels in `[0, k]`.
 *
 * # Safety
 * `levels` must point to `n * n` readable values and `out` be valid.
 */
enum RbeStatus rbe_matrix_from_levels(size_t n,
                                      uint32_t k,
                                      const int64_t *levels,
                                      struct RbeMatrix **out);

/**
 * Number of vertices, or 0 for NULL.
 *
 * # Safety
 * `m` must be NULL or a live matrix handle.
 */
size_t rbe_matrix_n(const struct RbeMatrix *m);

/**
 * Number of levels, or 0 for NULL.
 *
 * # Safety
 * `m` must be NULL or a live matrix handle.
 */
uint32_t rbe_matrix_k(const struct RbeMatrix *m);

/**
 * # Safety
 * `m` must be NULL or a handle from this library, not yet freed.
 */
void rbe_matrix_free(struct RbeMatrix *m);

/**
 * Solves `m`. Returns `RBE_STATUS_OK` or `RBE_STATUS_INFEASIBLE`, and in
 * both cases stores an outcome handle in `out`.
 *
 * # Safety
 * `m` must be a live matrix handle and `out` a valid pointer.
 */
enum RbeStatus rbe_solve(const struct RbeMatrix *m, enum RbeMethod method, struct RbeOutcome **out);

/**
 * # Safety
 * `o` must be NULL or a live outcome handle.
 */
bool rbe_outcome_is_feasible(const struct RbeOutcome *o);

/**
 * The outcome as `solve --json` prints it. Free with [`rbe_string_free`].
 * Returns NULL for a NULL handle.
 *
 * # Safety
 * `o` must be NULL or a live outcome handle.
 */
char *rbe_outcome_to_json(const struct RbeOutcome *o);

/**
 * Copies `d` (length `k`) and `pi` (length `n`) of a feasible outcome as
 * doubles. Either buffer may be NULL to skip it.
 *
 * # Safety
 * Non-NULL buffers must hold at least the given number of doubles.
 */
enum RbeStatus rbe_outcome_values(const struct RbeOutcome *o,
                                  double *d,
                                  size_t d_len,
                                  double *pi,
                                  size_t pi_len);

/**
 * # Safety
 * `o` must be NULL or a handle from this library, not yet freed.
 */
void rbe_outcome_free(struct RbeOutcome *o);

/**
 * Checks an embedding given as JSON `{"d": [...], "pi": [...]}` with exact
 * rational strings. Returns `RBE_STATUS_OK` if it verifies and
 * `RBE_STATUS_INFEASIBLE` with the violation in [`rbe_last_error`] if not.
 *
 * # Safety
 * `m` must be a live matrix handle and `json` a NUL-terminated string.
 */
enum RbeStatus rbe_verify_json(const struct RbeMatrix *m, const char *json);

/**
 * Checks positions `pi` (length `n`) against thresholds `d` (length `k`)
 * given as exact rational strings such as `"13/2"` or `"6.5"`.
 *
 * # Safety
 * `d` and `pi` must point to `d_len` and `pi_len` NUL-terminated strings.
 */
enum RbeStatus rbe_verify(const struct RbeMatrix *m,
                          const char *const *d,
                          size_t d_len,
                          const char *const *pi,
                          size_t pi_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROBINSON_EMBED_H */
