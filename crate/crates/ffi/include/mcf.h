#ifndef MCF_H
#define MCF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum McfStatus {
  MCF_STATUS_OK = 0,
  MCF_STATUS_NULL_POINTER = 1,
  MCF_STATUS_INVALID_UTF8 = 2,
  MCF_STATUS_INVALID_INPUT = 3,
  MCF_STATUS_VIOLATION = 4,
  MCF_STATUS_BUDGET_EXHAUSTED = 5,
  MCF_STATUS_DEGENERATE = 6,
  MCF_STATUS_OUT_OF_RANGE = 7,
  MCF_STATUS_PANIC = 8,
} McfStatus;

/**
 * Cubic certificate of a periodic expansion.
 */
typedef struct McfCertificate McfCertificate;

/**
 * Expansion of a tuple of reals.
 */
typedef struct McfExpansion McfExpansion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Valid until the next
 * call on the same thread; never null.
 */
const char *mcf_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void mcf_string_free(char *s);

/**
 * Expands the reals in `inputs_json` (an array of real values) for `steps`
 * indices.
 *
 * # Safety
 * `inputs_json` must be a valid nul-terminated string and `out` writable.
 */
enum McfStatus mcf_expand(const char *inputs_json, uintptr_t steps, struct McfExpansion **out);

/**
 * Number of sequences (the starting dimension).
 *
 * # Safety
 * `h` must be a live handle.
 */
uintptr_t mcf_expansion_dim(const struct McfExpansion *h);

/**
 * Length of sequence `j`, or 0 for a bad handle or index.
 *
 * # Safety
 * `h` must be a live handle.
 */
uintptr_t mcf_expansion_len(const struct McfExpansion *h, uintptr_t j);

/**
 * Number of interruptions met.
 *
 * # Safety
 * `h` must be a live handle.
 */
uintptr_t mcf_expansion_interruptions(const struct McfExpansion *h);

/**
 * Quotient `a^{(j+1)}_n` as a decimal string.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum McfStatus mcf_expansion_quotient(const struct McfExpansion *h,
                                      uintptr_t j,
                                      uintptr_t n,
                                      char **out);

/**
 * The quotients as `{"m":…, "seqs":[[…],…]}`.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum McfStatus mcf_expansion_json(const struct McfExpansion *h, char **out);

/**
 * # Safety
 * `h` must come from [`mcf_expand`] and not be freed twice. Null is ignored.
 */
void mcf_expansion_free(struct McfExpansion *h);

/**
 * Solves a periodic expansion of dimension 2. Each argument is a comma
 * separated integer list; the pre-periods may be empty strings.
 *
 * # Safety
 * All strings must be valid and nul-terminated; `out` writable.
 */
enum McfStatus mcf_periodic_solve(const char *pre_a,
                                  const char *pre_b,
                                  const char *per_a,
                                  const char *per_b,
                                  struct McfCertificate **out);

/**
 * Coefficient of `x^(3-i)` in the minimal polynomial of the first
 * (`which = 0`) or second (`which = 1`) coordinate.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum McfStatus mcf_certificate_coeff(const struct McfCertificate *h,
                                     uint32_t which,
                                     uintptr_t i,
                                     char **out);

/**
 * 1 if the height bound holds, 0 if it fails, -1 if it does not apply.
 *
 * # Safety
 * `h` must be a live handle.
 */
int32_t mcf_certificate_bound_holds(const struct McfCertificate *h);

/**
 * The whole certificate as JSON.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum McfStatus mcf_certificate_json(const struct McfCertificate *h, char **out);

/**
 * # Safety
 * `h` must come from [`mcf_periodic_solve`] and not be freed twice. Null is
 * ignored.
 */
void mcf_certificate_free(struct McfCertificate *h);

/**
 * Admissibility of the quotients in `pq_json`. Writes 1 or 0 to `out`.
 *
 * # Safety
 * `pq_json` must be valid and nul-terminated; `out` writable.
 */
enum McfStatus mcf_check_admissible(const char *pq_json, int32_t *out);

/**
 * Builds a Liouville-type expansion through index `depth`. `rules` holds
 * one rule per coordinate after the first, separated by `;`
 * (e.g. `const:0`). Writes the quotients as JSON.
 *
 * # Safety
 * Strings must be valid and nul-terminated; `out` writable.
 */
enum McfStatus mcf_construct_liouville(uintptr_t m,
                                       const char *delta,
                                       const char *rules,
                                       uintptr_t depth,
                                       char **out);

/**
 * Runs the Liouville-type criterion through index `depth` and writes the
 * report as JSON. Returns `Violation` (with the report written) when a
 * hypothesis fails.
 *
 * # Safety
 * Strings must be valid and nul-terminated; `out` writable.
 */
enum McfStatus mcf_verify_liouville(const char *pq_json,
                                    const char *delta,
                                    uintptr_t depth,
                                    char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MCF_H */
