#ifndef CMCLASS_H
#define CMCLASS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CmStatus {
  CM_STATUS_OK = 0,
  CM_STATUS_NULL_POINTER = 1,
  CM_STATUS_INVALID_UTF8 = 2,
  CM_STATUS_PARSE = 3,
  CM_STATUS_INVALID_ARGUMENT = 4,
  CM_STATUS_DEGREE_BOUND = 5,
  CM_STATUS_NOT_CM = 6,
  CM_STATUS_UNSUPPORTED = 7,
  CM_STATUS_NON_INTEGRAL = 8,
  CM_STATUS_INTERNAL = 9,
  CM_STATUS_PANIC = 10,
} CmStatus;

/**
 * Opaque field handle.
 */
typedef struct CmField CmField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a field from a specification. `max_degree` 0 selects the default
 * bound. On success `*out` owns a handle to release with [`cm_field_free`].
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CmStatus cm_field_new(const char *spec, size_t max_degree, struct CmField **out);

/**
 * Releases a handle from [`cm_field_new`]. Null is ignored.
 *
 * # Safety
 * `field` must come from [`cm_field_new`] and not be freed twice.
 */
void cm_field_free(struct CmField *field);

/**
 * Conductor, degree, order of the roots of unity, and whether the field is CM.
 *
 * # Safety
 * Pointers must be valid; `field` must be a live handle.
 */
enum CmStatus cm_field_info(const struct CmField *field,
                            uint64_t *conductor,
                            uint64_t *degree,
                            uint64_t *roots_of_unity,
                            bool *is_cm);

/**
 * Canonical specification of the field. Release with [`cm_string_free`].
 *
 * # Safety
 * `field` must be a live handle and `out` a valid pointer.
 */
enum CmStatus cm_field_spec(const struct CmField *field, char **out);

/**
 * h⁻(K) as a decimal string. `q_override` is 0 to use the rule cascade,
 * or 1 or 2. Release the string with [`cm_string_free`].
 *
 * # Safety
 * `field` must be a live handle and `out` a valid pointer.
 */
enum CmStatus cm_h_minus(const struct CmField *field, uint8_t q_override, char **out);

/**
 * Hasse unit index Q(K) and the order of the capitulation kernel
 * (0 when not decided).
 *
 * # Safety
 * `field` must be a live handle; `q` and `kappa` valid pointers.
 */
enum CmStatus cm_unit_index(const struct CmField *field, uint8_t *q, uint8_t *kappa);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void cm_string_free(char *s);

/**
 * Message for the last failed call on this thread, empty after a
 * successful call. Valid until the next call into the library.
 */
const char *cm_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CMCLASS_H */
