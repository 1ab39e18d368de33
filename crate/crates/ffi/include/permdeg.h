#ifndef PERMDEG_H
#define PERMDEG_H

#include <stdint.h>
#include <stdbool.h>

/**
 * Result codes.
 */
typedef enum PermdegStatus {
  PERMDEG_STATUS_OK = 0,
  PERMDEG_STATUS_NULL_POINTER = 1,
  PERMDEG_STATUS_INVALID_UTF8 = 2,
  PERMDEG_STATUS_INVALID_PRIME = 3,
  PERMDEG_STATUS_PARSE = 4,
  PERMDEG_STATUS_INVALID_PRESENTATION = 5,
  PERMDEG_STATUS_CATALOG = 6,
  PERMDEG_STATUS_BUDGET_EXHAUSTED = 7,
  PERMDEG_STATUS_OVERFLOW = 8,
  PERMDEG_STATUS_MISMATCH = 9,
  PERMDEG_STATUS_IO = 10,
  PERMDEG_STATUS_PANIC = 11,
} PermdegStatus;

/**
 * Opaque group handle.
 */
typedef struct PermdegGroup PermdegGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the message for the most recent failure on this thread, or NULL.
 * The caller owns the string and must release it with [`permdeg_string_free`].
 */
char *permdeg_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a pointer returned by this library that has not been freed.
 */
void permdeg_string_free(char *s);

/**
 * Builds a group from presentation text at prime `p`. `params` holds
 * `k=v` bindings separated by `;` and may be NULL.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string, `params` NULL or a valid
 * NUL-terminated string, and `out` a valid writable pointer.
 */
enum PermdegStatus permdeg_group_from_presentation(const char *text,
                                                   uint64_t p,
                                                   const char *params,
                                                   struct PermdegGroup **out);

/**
 * Loads a catalog group by id (for example `G_(3,23)`). `catalog_dir` may be
 * NULL to use the default catalog location.
 *
 * # Safety
 * `id` must be a valid NUL-terminated string, `catalog_dir` and `params`
 * NULL or valid NUL-terminated strings, and `out` a valid writable pointer.
 */
enum PermdegStatus permdeg_group_from_catalog(const char *catalog_dir,
                                              const char *id,
                                              uint64_t p,
                                              const char *params,
                                              struct PermdegGroup **out);

/**
 * Releases a group handle.
 *
 * # Safety
 * `g` must be NULL or a handle returned by this library that has not been freed.
 */
void permdeg_group_free(struct PermdegGroup *g);

/**
 * Returns `n` where the group has order `p^n`, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
uint32_t permdeg_group_log_order(const struct PermdegGroup *g);

/**
 * Returns the prime of the group, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
uint64_t permdeg_group_prime(const struct PermdegGroup *g);

/**
 * Returns `k` where the centre has order `p^k`, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
uint32_t permdeg_group_log_center(const struct PermdegGroup *g);

/**
 * Returns 1 when the collector rules are consistent, 0 otherwise or for NULL.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
bool permdeg_group_is_consistent(const struct PermdegGroup *g);

/**
 * Computes the minimal faithful permutation degree. `budget` 0 selects the
 * default limits.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid writable pointer.
 */
enum PermdegStatus permdeg_mu(const struct PermdegGroup *g, uint64_t budget, uint64_t *out);

/**
 * Computes the minimal faithful quasi-permutation degree. `budget` 0 selects
 * the default limits.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid writable pointer.
 */
enum PermdegStatus permdeg_c(const struct PermdegGroup *g, uint64_t budget, uint64_t *out);

/**
 * Writes a JSON certificate for the minimal degree: the point stabilisers
 * and their indices. Free the result with [`permdeg_string_free`].
 *
 * # Safety
 * `g` must be a live handle and `out` a valid writable pointer.
 */
enum PermdegStatus permdeg_mu_certificate_json(const struct PermdegGroup *g,
                                               uint64_t budget,
                                               char **out);

/**
 * Writes the minimal degree permutation representation as text: a
 * `degree n` line, then one line of 0-based images per pc generator.
 * Free the result with [`permdeg_string_free`].
 *
 * # Safety
 * `g` must be a live handle and `out` a valid writable pointer.
 */
enum PermdegStatus permdeg_export(const struct PermdegGroup *g, uint64_t budget, char **out);

/**
 * Verifies every catalog entry at prime `p`. Witness degrees are always
 * checked; `exact` also recomputes the values. Writes the number of failing
 * entries to `failures` and returns [`PermdegStatus::Mismatch`] when it is
 * nonzero.
 *
 * # Safety
 * `catalog_dir` must be NULL or a valid NUL-terminated string and
 * `failures` a valid writable pointer.
 */
enum PermdegStatus permdeg_verify_catalog(const char *catalog_dir,
                                          uint64_t p,
                                          bool exact,
                                          uint64_t budget,
                                          uint32_t *failures);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PERMDEG_H */
