#ifndef UNIVEXT_H
#define UNIVEXT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum UvxStatus {
  UVX_STATUS_OK = 0,
  UVX_STATUS_NULL_POINTER = 1,
  UVX_STATUS_INVALID_UTF8 = 2,
  UVX_STATUS_PARSE_ERROR = 3,
  UVX_STATUS_UNKNOWN_ALGEBRA = 4,
  UVX_STATUS_VALIDATION_ERROR = 5,
  UVX_STATUS_CHECKS_FAILED = 6,
  UVX_STATUS_INVALID_ARGUMENT = 7,
  UVX_STATUS_INTERNAL = 8,
} UvxStatus;

// Opaque handle to a Lie algebra.
typedef struct UvxLieAlgebra UvxLieAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread; empty if none. Valid until
// the next call on the same thread.
const char *uvx_last_error_message(void);

// Looks up a catalog algebra such as `"sl2"` or `"abelian(3)"`.
//
// # Safety
// `name` must be a nul-terminated string and `out` a valid pointer.
enum UvxStatus uvx_lie_algebra_from_name(const char *name, struct UvxLieAlgebra **out);

// Parses and validates a structure-constant JSON document.
//
// # Safety
// `json` must be a nul-terminated string and `out` a valid pointer.
enum UvxStatus uvx_lie_algebra_from_json(const char *json, struct UvxLieAlgebra **out);

// # Safety
// `alg` must come from a constructor above and not be freed twice.
void uvx_lie_algebra_free(struct UvxLieAlgebra *alg);

// # Safety
// `alg` must be a live handle and `out` a valid pointer.
enum UvxStatus uvx_lie_algebra_dim(const struct UvxLieAlgebra *alg, size_t *out);

// `dim V_g` of the universal invariant form.
//
// # Safety
// `alg` must be a live handle and `out` a valid pointer.
enum UvxStatus uvx_universal_form_dim(const struct UvxLieAlgebra *alg, size_t *out);

// Dimensions of `Z²`, `B²` and `H²` with coefficients `ℚ^coeff_dim`.
//
// # Safety
// `alg` must be a live handle and the three out-pointers valid.
enum UvxStatus uvx_h2_dims(const struct UvxLieAlgebra *alg,
                           size_t coeff_dim,
                           size_t *z2,
                           size_t *b2,
                           size_t *h2_dim);

// Runs a suite and hands back its JSON report, which must be released with
// `uvx_string_free`. Returns `ChecksFailed` when the report has a failing
// check; the report is produced either way.
//
// # Safety
// `suite` must be a nul-terminated string and `out_json` a valid pointer.
enum UvxStatus uvx_verify(const char *suite, int64_t window, uint64_t seed, char **out_json);

// # Safety
// `s` must come from this library and not be freed twice.
void uvx_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UNIVEXT_H */
