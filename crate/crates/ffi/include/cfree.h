#ifndef CFREE_H
#define CFREE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CfreeStatus {
  CFREE_STATUS_OK = 0,
  CFREE_STATUS_NULL_POINTER = 1,
  CFREE_STATUS_INVALID_UTF8 = 2,
  CFREE_STATUS_PARSE = 3,
  CFREE_STATUS_DOMAIN = 4,
  CFREE_STATUS_NOT_INVERTIBLE = 5,
  CFREE_STATUS_COMPOSITION_UNDEFINED = 6,
  CFREE_STATUS_OVERFLOW = 7,
  CFREE_STATUS_INSUFFICIENT_DATA = 8,
  CFREE_STATUS_ORDER_MISMATCH = 9,
  CFREE_STATUS_PANIC = 10,
  CFREE_STATUS_INVALID_ARGUMENT = 11,
} CfreeStatus;

typedef enum CfreeState {
  CFREE_STATE_PSI = 0,
  CFREE_STATE_PHI = 1,
} CfreeState;

typedef enum CfreeTransform {
  CFREE_TRANSFORM_R = 0,
  CFREE_TRANSFORM_T = 1,
  CFREE_TRANSFORM_S = 2,
  CFREE_TRANSFORM_CR = 3,
  CFREE_TRANSFORM_CT = 4,
  CFREE_TRANSFORM_CS = 5,
} CfreeTransform;

typedef enum CfreeConvolution {
  CFREE_CONVOLUTION_ADD = 0,
  CFREE_CONVOLUTION_MUL = 1,
} CfreeConvolution;

typedef enum CfreePath {
  CFREE_PATH_TRANSFORM = 0,
  CFREE_PATH_AXIOMATIC = 1,
  CFREE_PATH_OPERATOR = 2,
} CfreePath;

/**
 * Opaque two-state law.
 */
typedef struct CfreeLaw CfreeLaw;

/**
 * Opaque truncated power series.
 */
typedef struct CfreeSeries CfreeSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null after a
 * successful one. Valid until the next call on the same thread.
 */
const char *cfree_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cfree_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` is null or was returned by this library and not yet freed.
 */
void cfree_string_free(char *s);

/**
 * Parses a law from JSON `{"psi": [...], "phi": [...]}`.
 *
 * # Safety
 * `json` is a NUL-terminated string; `out` is writable.
 */
enum CfreeStatus cfree_law_from_json(const char *json, struct CfreeLaw **out);

/**
 * # Safety
 * `law` is a live handle; `out` is writable.
 */
enum CfreeStatus cfree_law_to_json(const struct CfreeLaw *law, char **out);

/**
 * Number of moments per state, or 0 for a null handle.
 *
 * # Safety
 * `law` is null or a live handle.
 */
size_t cfree_law_order(const struct CfreeLaw *law);

/**
 * The `n`-th moment (`n >= 1`) in the given state, as `"p/q"`.
 *
 * # Safety
 * `law` is a live handle; `out` is writable.
 */
enum CfreeStatus cfree_law_moment(const struct CfreeLaw *law,
                                  enum CfreeState state,
                                  size_t n,
                                  char **out);

/**
 * # Safety
 * `law` is null or a handle not yet freed.
 */
void cfree_law_free(struct CfreeLaw *law);

/**
 * Parses a series from JSON `{"order": N, "coeffs": [...]}`.
 *
 * # Safety
 * `json` is a NUL-terminated string; `out` is writable.
 */
enum CfreeStatus cfree_series_from_json(const char *json, struct CfreeSeries **out);

/**
 * # Safety
 * `series` is a live handle; `out` is writable.
 */
enum CfreeStatus cfree_series_to_json(const struct CfreeSeries *series, char **out);

/**
 * Truncation order, or 0 for a null handle.
 *
 * # Safety
 * `series` is null or a live handle.
 */
size_t cfree_series_order(const struct CfreeSeries *series);

/**
 * Coefficient of `z^k` as `"p/q"`.
 *
 * # Safety
 * `series` is a live handle; `out` is writable.
 */
enum CfreeStatus cfree_series_coeff(const struct CfreeSeries *series, size_t k, char **out);

/**
 * # Safety
 * `series` is null or a handle not yet freed.
 */
void cfree_series_free(struct CfreeSeries *series);

/**
 * Computes a transform of `law`.
 *
 * # Safety
 * `law` is a live handle; `out` is writable.
 */
enum CfreeStatus cfree_transform(const struct CfreeLaw *law,
                                 enum CfreeTransform kind,
                                 struct CfreeSeries **out);

/**
 * Recovers moments from a transform as a JSON array of `"p/q"` strings:
 * `ψ`-moments for `R`, `T`, `S` and `φ`-moments for the conditional kinds.
 * `psi_law` supplies the `ψ`-moments the conditional kinds need and may be
 * null otherwise.
 *
 * # Safety
 * `series` is a live handle; `psi_law` is null or a live handle; `out` is
 * writable.
 */
enum CfreeStatus cfree_invert(enum CfreeTransform kind,
                              const struct CfreeSeries *series,
                              const struct CfreeLaw *psi_law,
                              char **out);

/**
 * Law of `X + Y` or `XY` through order `n` along one computation path.
 *
 * # Safety
 * `x`, `y` are live handles; `out` is writable.
 */
enum CfreeStatus cfree_convolve(enum CfreeConvolution kind,
                                enum CfreePath path,
                                const struct CfreeLaw *x,
                                const struct CfreeLaw *y,
                                size_t n,
                                struct CfreeLaw **out);

/**
 * Runs all three convolution paths. Writes whether they agree and the full
 * report as JSON. A failed precondition is reported in the JSON with
 * `agree = false` and status `Ok`.
 *
 * # Safety
 * `x`, `y` are live handles; `agree` and `report_json` are writable.
 */
enum CfreeStatus cfree_cross_check(enum CfreeConvolution kind,
                                   const struct CfreeLaw *x,
                                   const struct CfreeLaw *y,
                                   size_t n,
                                   bool *agree,
                                   char **report_json);

/**
 * Runs a named verification suite. Writes whether it passed and the report
 * as JSON.
 *
 * # Safety
 * `suite` is a NUL-terminated string; `passed` and `report_json` are
 * writable.
 */
enum CfreeStatus cfree_verify(const char *suite,
                              size_t trials,
                              uint64_t seed,
                              size_t order,
                              bool *passed,
                              char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CFREE_H */
