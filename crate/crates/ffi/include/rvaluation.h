#ifndef RVALUATION_H
#define RVALUATION_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum RvStatus {
  RV_STATUS_OK = 0,
  // A required pointer argument was null.
  RV_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  RV_STATUS_INVALID_UTF8 = 2,
  // A literal did not parse.
  RV_STATUS_PARSE = 3,
  // Well-formed input that the operation rejects.
  RV_STATUS_INVALID_INPUT = 4,
  // Refinement stopped at the depth cap above the tolerance.
  RV_STATUS_DEPTH_CAP = 5,
  // A panic was caught at the boundary.
  RV_STATUS_INTERNAL = 6,
} RvStatus;

// Piecewise monotone function on `[0,1]`, held as its canonical extension.
typedef struct RvFunction RvFunction;

// Finite poset handle.
typedef struct RvPoset RvPoset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer is
// valid until the next call into this library on the same thread.
const char *rv_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void rv_string_free(char *s);

// Parses a poset literal such as `poset { a <= b; c }`.
//
// # Safety
// `src` must be a NUL-terminated string and `out` writable.
enum RvStatus rv_poset_parse(const char *src, struct RvPoset **out);

// Number of points, or 0 for null.
//
// # Safety
// `poset` must be null or a live handle.
uintptr_t rv_poset_len(const struct RvPoset *poset);

// # Safety
// `poset` must be null or a live handle; it is invalid afterwards.
void rv_poset_free(struct RvPoset *poset);

// Evaluates an elementary valuation at an interval-valued test function,
// both given as literals over `poset`.
//
// # Safety
// String arguments must be NUL-terminated, `poset` live and `out` writable.
enum RvStatus rv_valuation_evaluate(const struct RvPoset *poset,
                                    const char *valuation,
                                    const char *function,
                                    char **out);

// Evaluates the interval valuation induced by a finite-support measure.
//
// # Safety
// As for [`rv_valuation_evaluate`].
enum RvStatus rv_measure_evaluate(const struct RvPoset *poset,
                                  const char *measure,
                                  const char *function,
                                  char **out);

// Parses a piecewise monotone function on `[0,1]`.
//
// # Safety
// `src` must be a NUL-terminated string and `out` writable.
enum RvStatus rv_function_parse(const char *src, struct RvFunction **out);

// # Safety
// `function` must be null or a live handle; it is invalid afterwards.
void rv_function_free(struct RvFunction *function);

// The depth-`n` enclosure of the integral of `function`.
//
// # Safety
// `function` must be live and `out` writable.
enum RvStatus rv_lebesgue_n(const struct RvFunction *function, uint32_t n, char **out);

// Refines until the enclosure is at most `eps` wide (`eps` is a rational
// literal such as `1/4096`). `threads` of 0 runs on the calling thread.
//
// On `RV_STATUS_DEPTH_CAP` the deepest enclosure reached is still
// written to `out` and `depth`.
//
// # Safety
// `function` must be live, `eps` NUL-terminated, `out` and `depth` writable.
enum RvStatus rv_integrate(const struct RvFunction *function,
                           const char *eps,
                           uint32_t depth_cap,
                           uint32_t threads,
                           char **out,
                           uint32_t *depth);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RVALUATION_H */
