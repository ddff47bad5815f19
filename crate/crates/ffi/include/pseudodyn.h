#ifndef PSEUDODYN_H
#define PSEUDODYN_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PdStatus {
  PD_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  PD_STATUS_NULL_ARGUMENT = 1,
  /**
   * Malformed JSON, labels, rationals or UTF-8.
   */
  PD_STATUS_INVALID_INPUT = 2,
  /**
   * The model is well formed but the query's preconditions fail.
   */
  PD_STATUS_PRECONDITION = 3,
  /**
   * The query exceeds a size limit of the library.
   */
  PD_STATUS_CAPABILITY = 4,
  /**
   * An output buffer is shorter than the number of points.
   */
  PD_STATUS_BUFFER_TOO_SMALL = 5,
  /**
   * The library panicked. The handle should not be used again.
   */
  PD_STATUS_INTERNAL = 6,
} PdStatus;

/**
 * Opaque model handle.
 */
typedef struct PdModel PdModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *pd_last_error(void);

/**
 * Library version, a static string.
 */
const char *pd_version(void);

/**
 * Parses a model file and completes its generators with the identity and
 * inverses. On success `*out` owns a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PdStatus pd_model_from_json(const char *json, struct PdModel **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `model` must come from `pd_model_from_json` and not be freed twice.
 */
void pd_model_free(struct PdModel *model);

/**
 * Number of points, 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
size_t pd_point_count(const struct PdModel *model);

/**
 * Index of the point with the given label.
 *
 * # Safety
 * `model` must be a live handle, `label` NUL-terminated, `out` valid.
 */
enum PdStatus pd_point_index(const struct PdModel *model, const char *label, size_t *out);

/**
 * Whether the system is good. Generators without a core make this a
 * precondition failure.
 *
 * # Safety
 * `model` must be a live handle and `out` valid.
 */
enum PdStatus pd_is_good(const struct PdModel *model, bool *out);

/**
 * The dynamical ball of `x` of length `n` and radius `eps`, as a mask.
 *
 * # Safety
 * `model` must be a live handle, `eps` NUL-terminated and `out` writable
 * for `len` bytes.
 */
enum PdStatus pd_dyn_ball(const struct PdModel *model,
                          size_t x,
                          size_t n,
                          const char *eps,
                          bool closed,
                          uint8_t *out,
                          size_t len);

/**
 * The closed Bowen ball of `x` at scale `delta`, as a mask.
 *
 * # Safety
 * `model` must be a live handle, `delta` NUL-terminated and `out`
 * writable for `len` bytes.
 */
enum PdStatus pd_bowen_ball(const struct PdModel *model,
                            size_t x,
                            const char *delta,
                            uint8_t *out,
                            size_t len);

/**
 * Bounds on the largest `(n, eps)`-separated set. Exact search gives
 * `lower == upper`.
 *
 * # Safety
 * `model` must be a live handle, `eps` NUL-terminated, `lower` and `upper`
 * valid.
 */
enum PdStatus pd_separated_count(const struct PdModel *model,
                                 size_t n,
                                 const char *eps,
                                 bool exact,
                                 size_t *lower,
                                 size_t *upper);

/**
 * Measure of a point mask as an exact rational string. The model needs a
 * measure. Release the string with `pd_string_free`.
 *
 * # Safety
 * `model` must be a live handle, `mask` readable for `len` bytes and `out`
 * valid.
 */
enum PdStatus pd_measure_of(const struct PdModel *model,
                            const uint8_t *mask,
                            size_t len,
                            char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void pd_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PSEUDODYN_H */
