#ifndef ISOLAB_H
#define ISOLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Values are stable; new codes are only appended.
 */
typedef enum IsolabStatus {
  ISOLAB_STATUS_OK = 0,
  ISOLAB_STATUS_NULL_POINTER = 1,
  ISOLAB_STATUS_INVALID_UTF8 = 2,
  ISOLAB_STATUS_PARSE = 3,
  ISOLAB_STATUS_INVALID_ARGUMENT = 4,
  ISOLAB_STATUS_INSUFFICIENT_PRECISION = 5,
  ISOLAB_STATUS_NOT_INVERTIBLE = 6,
  ISOLAB_STATUS_DIVIDE_BY_ZERO = 7,
  ISOLAB_STATUS_NON_PRIME = 8,
  ISOLAB_STATUS_FIELD_TOO_LARGE = 9,
  ISOLAB_STATUS_DEGREE_TOO_SMALL = 10,
  ISOLAB_STATUS_LENGTH_MISMATCH = 11,
  ISOLAB_STATUS_SUM_MISMATCH = 12,
  ISOLAB_STATUS_NOT_A_NEWTON_POINT = 13,
  ISOLAB_STATUS_UNREALIZABLE = 14,
  ISOLAB_STATUS_SAMPLING_EXHAUSTED = 15,
  ISOLAB_STATUS_BAD_HODGE_PROFILE = 16,
  ISOLAB_STATUS_INVALID_PARAMS = 17,
  ISOLAB_STATUS_RANGE_ERROR = 18,
  ISOLAB_STATUS_ZERO_VALUATION = 19,
  ISOLAB_STATUS_IO = 20,
  ISOLAB_STATUS_INTERNAL = 21,
  ISOLAB_STATUS_PANIC = 22,
} IsolabStatus;

/**
 * Cocharacter with rational slopes in decreasing order.
 */
typedef struct IsolabCochar IsolabCochar;

/**
 * Coefficient field `F_{p^m}` with its working precision.
 */
typedef struct IsolabField IsolabField;

/**
 * Square matrix over `F_{p^m}((π))`.
 */
typedef struct IsolabMatrix IsolabMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *isolab_last_error(void);

/**
 * Library version as a static string.
 */
const char *isolab_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void isolab_string_free(char *s);

/**
 * Create the field `F_{p^m}` with working precision `prec` (at least 8).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum IsolabStatus isolab_field_new(uint32_t p, uint32_t m, int64_t prec, struct IsolabField **out);

/**
 * # Safety
 * `field` must be null or a handle from [`isolab_field_new`] not yet freed.
 */
void isolab_field_free(struct IsolabField *field);

/**
 * Parse a matrix from its JSON encoding (`{"n", "entries"}` or an array of rows).
 *
 * # Safety
 * `field` must be a live handle, `json` a NUL-terminated string and `out` writable.
 */
enum IsolabStatus isolab_matrix_from_json(const struct IsolabField *field,
                                          const char *json,
                                          struct IsolabMatrix **out);

/**
 * JSON encoding of a matrix; release with [`isolab_string_free`].
 *
 * # Safety
 * `matrix` must be a live handle and `out` writable.
 */
enum IsolabStatus isolab_matrix_to_json(const struct IsolabMatrix *matrix, char **out);

/**
 * Number of rows.
 *
 * # Safety
 * `matrix` must be null or a live handle.
 */
size_t isolab_matrix_size(const struct IsolabMatrix *matrix);

/**
 * # Safety
 * `matrix` must be null or a handle not yet freed.
 */
void isolab_matrix_free(struct IsolabMatrix *matrix);

/**
 * Hodge point (elementary divisor valuations).
 *
 * # Safety
 * `matrix` must be a live handle and `out` writable.
 */
enum IsolabStatus isolab_hodge_point(const struct IsolabMatrix *matrix, struct IsolabCochar **out);

/**
 * Newton point of `bσ`.
 *
 * # Safety
 * `matrix` must be a live handle and `out` writable.
 */
enum IsolabStatus isolab_newton_point(const struct IsolabMatrix *matrix, struct IsolabCochar **out);

/**
 * Parse a cocharacter from a JSON array of `"num/den"` strings.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum IsolabStatus isolab_cochar_from_json(const char *json, struct IsolabCochar **out);

/**
 * JSON array of slopes; release with [`isolab_string_free`].
 *
 * # Safety
 * `cochar` must be a live handle and `out` writable.
 */
enum IsolabStatus isolab_cochar_to_json(const struct IsolabCochar *cochar, char **out);

/**
 * Number of slopes.
 *
 * # Safety
 * `cochar` must be null or a live handle.
 */
size_t isolab_cochar_len(const struct IsolabCochar *cochar);

/**
 * Slope `index` (in decreasing order) as a reduced fraction `num/den`, `den > 0`.
 *
 * # Safety
 * `cochar` must be a live handle; `num` and `den` writable.
 */
enum IsolabStatus isolab_cochar_slope(const struct IsolabCochar *cochar,
                                      size_t index,
                                      int64_t *num,
                                      int64_t *den);

/**
 * Whether `a ≺ b` in the dominance order.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` writable.
 */
enum IsolabStatus isolab_cochar_dominates(const struct IsolabCochar *a,
                                          const struct IsolabCochar *b,
                                          bool *out);

/**
 * Distance `|a, b|` between the polygons as a reduced fraction.
 *
 * # Safety
 * `a`, `b` must be live handles; `num` and `den` writable.
 */
enum IsolabStatus isolab_cochar_metric(const struct IsolabCochar *a,
                                       const struct IsolabCochar *b,
                                       int64_t *num,
                                       int64_t *den);

/**
 * # Safety
 * `cochar` must be null or a handle not yet freed.
 */
void isolab_cochar_free(struct IsolabCochar *cochar);

/**
 * Run a CLI command in-process.
 *
 * `config_json` is an object whose keys match the long flags (`p`, `m`,
 * `prec`, `seed`, `depth`, `trials`, `kmax`, `e`, `n`, `level`, `format`)
 * plus `"in"` for the input document; it may be null for defaults. On
 * return `*out` holds the report, or an error document when the status is
 * not `Ok`; release it with [`isolab_string_free`].
 *
 * # Safety
 * `command` must be a NUL-terminated string, `config_json` null or one, and `out` writable.
 */
enum IsolabStatus isolab_run_json(const char *command, const char *config_json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISOLAB_H */
