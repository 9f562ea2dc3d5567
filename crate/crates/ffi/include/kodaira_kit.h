#ifndef KODAIRA_KIT_H
#define KODAIRA_KIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every exported call.
 */
typedef enum KkStatus {
  KK_STATUS_OK = 0,
  KK_STATUS_NULL_POINTER = 1,
  KK_STATUS_INVALID_UTF8 = 2,
  KK_STATUS_PARSE_ERROR = 3,
  /**
   * Input parsed but violates a mathematical precondition.
   */
  KK_STATUS_DOMAIN_ERROR = 4,
  KK_STATUS_PANIC = 5,
} KkStatus;

/**
 * Rank and Chern numbers of a vector bundle.
 */
typedef struct KkBundle KkBundle;

/**
 * Configuration of curves with marked points.
 */
typedef struct KkConfig KkConfig;

/**
 * Compact complex surface invariants.
 */
typedef struct KkSurface KkSurface;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The caller owns
 * the returned string.
 */
char *kk_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void kk_string_free(char *s);

/**
 * Schema tag of the JSON documents produced and accepted. Static; do not
 * free.
 */
const char *kk_schema(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum KkStatus kk_surface_new(int64_t k_squared,
                             int64_t c2,
                             int64_t picard_rank,
                             int64_t alg_dim,
                             int64_t kodaira_dim,
                             bool minimal,
                             bool kaehler,
                             struct KkSurface **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writes.
 */
enum KkStatus kk_surface_from_json(const char *json, struct KkSurface **out);

/**
 * # Safety
 * `s` must come from this library and not have been freed. Null is ignored.
 */
void kk_surface_free(struct KkSurface *s);

/**
 * Holomorphic Euler characteristic `(K^2 + c2) / 12`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum KkStatus kk_surface_chi_o(const struct KkSurface *s, int64_t *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum KkStatus kk_bundle_new(int64_t rank,
                            int64_t c1_sq,
                            int64_t c1_dot_k,
                            int64_t c2,
                            struct KkBundle **out);

/**
 * # Safety
 * `b` must come from this library and not have been freed. Null is ignored.
 */
void kk_bundle_free(struct KkBundle *b);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writes.
 */
enum KkStatus kk_config_from_json(const char *json, struct KkConfig **out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum KkStatus kk_config_to_json(const struct KkConfig *c, char **out_json);

/**
 * # Safety
 * Pointers must be valid.
 */
enum KkStatus kk_config_len(const struct KkConfig *c, size_t *out);

/**
 * # Safety
 * `c` must come from this library and not have been freed. Null is ignored.
 */
void kk_config_free(struct KkConfig *c);

/**
 * Property (P) for the divisor given as comma-separated curve ids, or for
 * the sum of all curves when `divisor` is null. `out_json` may be null.
 *
 * # Safety
 * Non-null pointers must be valid.
 */
enum KkStatus kk_check_p(const struct KkConfig *c,
                         const char *divisor,
                         bool *out_holds,
                         char **out_json);

/**
 * Blows up a marked point. `out_exceptional` may be null.
 *
 * # Safety
 * Non-null pointers must be valid.
 */
enum KkStatus kk_blow_up(const struct KkConfig *c,
                         const char *point,
                         struct KkConfig **out,
                         char **out_exceptional);

/**
 * Contracts a (-1)-curve.
 *
 * # Safety
 * Pointers must be valid.
 */
enum KkStatus kk_blow_down(const struct KkConfig *c, const char *curve, struct KkConfig **out);

/**
 * Catalog entry of a Kodaira fiber (`"I5"`, `"2I3"`, `"I0*"`, `"IV*"`, ...)
 * as JSON, with its property-(P) census when `with_census` is set.
 *
 * # Safety
 * Pointers must be valid.
 */
enum KkStatus kk_fiber_json(const char *fiber_type, bool with_census, char **out_json);

/**
 * Runs the blow-down induction on a chain document. A failed verification
 * is reported as `KK_STATUS_DOMAIN_ERROR` with the reason in
 * [`kk_last_error`].
 *
 * # Safety
 * Non-null pointers must be valid; `out_json` may be null.
 */
enum KkStatus kk_discriminant(const char *chain_json, bool *out_verdict, char **out_json);

/**
 * Recomputes `chi(T_X)` symbolically; `out_holds` is set when it matches
 * the closed form exactly. `out_json` may be null.
 *
 * # Safety
 * Non-null pointers must be valid.
 */
enum KkStatus kk_verify_riero(bool *out_holds, char **out_json);

/**
 * `h^1(T_X) - h^2(T_X)` for a given `h^0(T_X)`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum KkStatus kk_h1_minus_h2(const struct KkSurface *s,
                             const struct KkBundle *e,
                             uint64_t h0,
                             int64_t *out);

/**
 * Full deformation report as JSON.
 *
 * # Safety
 * Pointers must be valid.
 */
enum KkStatus kk_classify(const struct KkSurface *s,
                          const struct KkBundle *e,
                          uint64_t h0,
                          char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KODAIRA_KIT_H */
