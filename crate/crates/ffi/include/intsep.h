#ifndef INTSEP_H
#define INTSEP_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Intervals may only move right.
 */
#define INTSEP_MODE_ONE 0

/**
 * Intervals may move either way.
 */
#define INTSEP_MODE_TWO 1

#define INTSEP_ALGO_FAST 0

#define INTSEP_ALGO_PRELIM 1

/**
 * Exhaustive search; at most 10 intervals.
 */
#define INTSEP_ALGO_BRUTE 2

/**
 * Result code of every fallible call.
 */
typedef enum {
  INTSEP_STATUS_OK = 0,
  INTSEP_STATUS_NULL_ARGUMENT = 1,
  INTSEP_STATUS_INVALID_UTF8 = 2,
  INTSEP_STATUS_PARSE_ERROR = 3,
  INTSEP_STATUS_INVALID_INSTANCE = 4,
  INTSEP_STATUS_INVALID_ARGUMENT = 5,
  INTSEP_STATUS_TOO_LARGE = 6,
  INTSEP_STATUS_BUFFER_TOO_SMALL = 7,
  INTSEP_STATUS_INTERNAL = 8,
} IntsepStatus;

/**
 * Opaque validated instance.
 */
typedef struct IntsepInstance IntsepInstance;

/**
 * Opaque solution together with the instance it solves.
 */
typedef struct IntsepSolution IntsepSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *intsep_last_error(void);

/**
 * Parses an instance from the text format (`left right` per line).
 *
 * # Safety
 * `text` must be null or a NUL-terminated string; `out` must be null or
 * writable.
 */
IntsepStatus intsep_instance_parse(const char *text, IntsepInstance **out);

/**
 * Builds an instance from `n` integer endpoint pairs.
 *
 * # Safety
 * `lefts` and `rights` must point to `n` readable values each; `out` must
 * be null or writable.
 */
IntsepStatus intsep_instance_from_arrays(const int64_t *lefts,
                                         const int64_t *rights,
                                         size_t n,
                                         IntsepInstance **out);

/**
 * Number of intervals, or 0 for null.
 *
 * # Safety
 * `inst` must be null or a live handle.
 */
size_t intsep_instance_len(const IntsepInstance *inst);

/**
 * # Safety
 * `inst` must be null or a handle not yet freed.
 */
void intsep_instance_free(IntsepInstance *inst);

/**
 * Solves `inst` with one of the `INTSEP_ALGO_*` solvers in one of the
 * `INTSEP_MODE_*` modes.
 *
 * # Safety
 * `inst` must be null or a live handle; `out` must be null or writable.
 */
IntsepStatus intsep_solve(const IntsepInstance *inst,
                          uint32_t mode,
                          uint32_t algo,
                          IntsepSolution **out);

/**
 * Optimal max-displacement as an exact decimal or `p/q` string; null on a
 * null handle. Release with [`intsep_string_free`].
 *
 * # Safety
 * `sol` must be null or a live handle.
 */
char *intsep_solution_delta(const IntsepSolution *sol);

/**
 * Optimal max-displacement rounded to the nearest double; NaN on null.
 *
 * # Safety
 * `sol` must be null or a live handle.
 */
double intsep_solution_delta_f64(const IntsepSolution *sol);

/**
 * Writes the left-to-right order as 0-based input positions into `buf`.
 *
 * # Safety
 * `sol` must be null or a live handle; `buf` must have room for `cap`
 * values.
 */
IntsepStatus intsep_solution_order(const IntsepSolution *sol, size_t *buf, size_t cap);

/**
 * New left endpoint of the interval at 0-based input position `id`,
 * rendered exactly. Null for a null handle or an out-of-range id.
 *
 * # Safety
 * `sol` must be null or a live handle.
 */
char *intsep_solution_position(const IntsepSolution *sol, size_t id);

/**
 * The solution in the text solution format. Release with
 * [`intsep_string_free`].
 *
 * # Safety
 * `sol` must be null or a live handle.
 */
char *intsep_solution_render(const IntsepSolution *sol);

/**
 * # Safety
 * `sol` must be null or a handle not yet freed.
 */
void intsep_solution_free(IntsepSolution *sol);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void intsep_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INTSEP_H */
