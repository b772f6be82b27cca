#ifndef OPERADIC_H
#define OPERADIC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes shared by every entry point.
 */
typedef enum OperadicStatus {
  OPERADIC_STATUS_OK = 0,
  /**
   * The computation ran and found violations.
   */
  OPERADIC_STATUS_VIOLATION = 1,
  OPERADIC_STATUS_INVALID_ARGUMENT = 2,
  OPERADIC_STATUS_BUDGET_EXCEEDED = 3,
  OPERADIC_STATUS_NULL_POINTER = 4,
  OPERADIC_STATUS_INVALID_UTF8 = 5,
  OPERADIC_STATUS_INTERNAL = 6,
} OperadicStatus;

/**
 * A built `B_{m,r}`.
 */
typedef struct OperadicBm OperadicBm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string; do not free.
 */
const char *operadic_version(void);

/**
 * Message for the last failure on this thread, or NULL. Valid until the
 * next call on the same thread; do not free.
 */
const char *operadic_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void operadic_string_free(char *s);

/**
 * Runs the command line `argv[0..argc]` (without the program name) and
 * returns the certificate JSON and the process exit code.
 *
 * # Safety
 * `argv` must point to `argc` valid NUL-terminated strings; the out
 * pointers must be valid for writes.
 */
enum OperadicStatus operadic_run(size_t argc,
                                 const char *const *argv,
                                 char **out_json,
                                 int32_t *out_exit_code);

/**
 * Builds `B_{m,r}`; free with [`operadic_bm_free`].
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum OperadicStatus operadic_bm_new(int64_t m, size_t r, struct OperadicBm **out);

/**
 * # Safety
 * `b` must come from [`operadic_bm_new`] and not have been freed. NULL is ignored.
 */
void operadic_bm_free(struct OperadicBm *b);

/**
 * Degree of the generator `x_n`, `2 ≤ n ≤ r`.
 *
 * # Safety
 * `b` must be a live handle and `out` valid for writes.
 */
enum OperadicStatus operadic_bm_generator_degree(const struct OperadicBm *b,
                                                 size_t n,
                                                 int64_t *out);

/**
 * Checks `d∘d = 0`; `Violation` if it fails.
 *
 * # Safety
 * `b` must be a live handle.
 */
enum OperadicStatus operadic_bm_certify(const struct OperadicBm *b);

/**
 * The algebra as JSON; free with [`operadic_string_free`].
 *
 * # Safety
 * `b` must be a live handle and `out` valid for writes.
 */
enum OperadicStatus operadic_bm_to_json(const struct OperadicBm *b, char **out);

/**
 * Checks `d∘d = 0` on every `μ_n`, `n ≤ max_arity`.
 */
enum OperadicStatus operadic_ainf_certify(size_t max_arity);

/**
 * Associative and unital point counts of `n`-dimensional structure
 * constants over `F_q`, by ideal evaluation.
 *
 * # Safety
 * The out pointers must be valid for writes.
 */
enum OperadicStatus operadic_moduli_count(size_t n,
                                          uint64_t q,
                                          uint64_t budget,
                                          uint64_t *out_assoc,
                                          uint64_t *out_unital);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPERADIC_H */
