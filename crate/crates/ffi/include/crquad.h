#ifndef CRQUAD_H
#define CRQUAD_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum CrqStatus {
  CRQ_STATUS_OK = 0,
  CRQ_STATUS_NULL_ARGUMENT = 1,
  CRQ_STATUS_INVALID_UTF8 = 2,
  CRQ_STATUS_PARSE_ERROR = 3,
  CRQ_STATUS_INVARIANT_VIOLATION = 4,
  CRQ_STATUS_DEGENERATE = 5,
  CRQ_STATUS_DIMENSION_MISMATCH = 6,
  CRQ_STATUS_NOT_CR = 10,
  CRQ_STATUS_NON_EXTENDABLE = 11,
  CRQ_STATUS_NO_SOLUTION = 12,
  CRQ_STATUS_FAILED = 20,
  CRQ_STATUS_PANIC = 99,
} CrqStatus;

/**
 * Opaque model handle.
 */
typedef struct CrqModel CrqModel;

/**
 * Opaque polynomial handle.
 */
typedef struct CrqPoly CrqPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer stays
 * valid until the next call into the library from the same thread.
 */
const char *crq_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *crq_version(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library that was not freed yet.
 */
void crq_string_free(char *s);

/**
 * Parses a model from its JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CrqStatus crq_model_from_json(const char *json, struct CrqModel **out);

/**
 * # Safety
 * `model` must be NULL or a handle from [`crq_model_from_json`] not freed yet.
 */
void crq_model_free(struct CrqModel *model);

/**
 * Number of complex variables, or 0 for a NULL handle.
 *
 * # Safety
 * `model` must be NULL or a live model handle.
 */
size_t crq_model_n(const struct CrqModel *model);

/**
 * Serializes the model back to JSON.
 *
 * # Safety
 * `model` must be a live handle and `out` a valid pointer.
 */
enum CrqStatus crq_model_to_json(const struct CrqModel *model, char **out);

/**
 * Parses a polynomial in `n` variables from text ("z1*zbar2 + 1/2*w") or
 * from a JSON polynomial file body.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CrqStatus crq_poly_parse(const char *text, size_t n, struct CrqPoly **out);

/**
 * # Safety
 * `poly` must be NULL or a polynomial handle not freed yet.
 */
void crq_poly_free(struct CrqPoly *poly);

/**
 * Text form of a polynomial.
 *
 * # Safety
 * `poly` must be a live handle and `out` a valid pointer.
 */
enum CrqStatus crq_poly_to_string(const struct CrqPoly *poly, char **out);

/**
 * JSON term-list form of a polynomial.
 *
 * # Safety
 * `poly` must be a live handle and `out` a valid pointer.
 */
enum CrqStatus crq_poly_to_json(const struct CrqPoly *poly, char **out);

/**
 * Dimension of the degree-`degree` homogeneous CR polynomials on the quadric.
 *
 * # Safety
 * `model` must be a live handle and `out` a valid pointer.
 */
enum CrqStatus crq_cr_dimension(const struct CrqModel *model, uint32_t degree, size_t *out);

/**
 * Tests whether `poly` is CR on the model. When it is not and `certificate`
 * is non-NULL, a new handle holding the nonzero `L f` is stored there.
 *
 * # Safety
 * `model` and `poly` must be live handles, `out` a valid pointer and
 * `certificate` NULL or a valid pointer.
 */
enum CrqStatus crq_is_cr(const struct CrqModel *model,
                         const struct CrqPoly *poly,
                         bool *out,
                         struct CrqPoly **certificate);

/**
 * Holomorphic extension `F(z, w)` of a CR polynomial on the quadric.
 *
 * # Safety
 * `model` and `poly` must be live handles and `out` a valid pointer.
 */
enum CrqStatus crq_extend(const struct CrqModel *model,
                          const struct CrqPoly *poly,
                          struct CrqPoly **out);

/**
 * Exact normal form as a JSON object with a "type" key.
 *
 * # Safety
 * `model` must be a live handle and `out` a valid pointer.
 */
enum CrqStatus crq_classify(const struct CrqModel *model, char **out);

/**
 * Searches for an elliptic direction. `found` receives whether one exists;
 * when it does and `out` is non-NULL, the direction is written there as a
 * JSON array of `["re","im"]` pairs.
 *
 * # Safety
 * `model` must be a live handle, `found` a valid pointer and `out` NULL or a
 * valid pointer.
 */
enum CrqStatus crq_find_elliptic_direction(const struct CrqModel *model, bool *found, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRQUAD_H */
