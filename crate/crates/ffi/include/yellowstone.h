#ifndef YELLOWSTONE_H
#define YELLOWSTONE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define YS_DOMAIN_ALL 0

#define YS_DOMAIN_ODD 1

/**
 * Result of every fallible call. Values 2 through 9 match the exit codes of
 * the command-line tool.
 */
typedef enum YsStatus {
  YS_STATUS_OK = 0,
  YS_STATUS_NULL_POINTER = 1,
  YS_STATUS_FORMAT = 2,
  YS_STATUS_INVALID_ARGUMENT = 3,
  YS_STATUS_RESOURCE_LIMIT = 4,
  YS_STATUS_OUT_OF_RANGE = 5,
  YS_STATUS_INTERNAL_LIMIT = 6,
  YS_STATUS_INSUFFICIENT_DATA = 7,
  YS_STATUS_INCONSISTENT = 8,
  YS_STATUS_IO = 9,
  /**
   * The value does not occur in the generated prefix.
   */
  YS_STATUS_NOT_FOUND = 10,
  /**
   * The output buffer is too small; the required size was still written.
   */
  YS_STATUS_BUFFER_TOO_SMALL = 11,
  YS_STATUS_PANIC = 12,
} YsStatus;

/**
 * Opaque sequence handle.
 */
typedef struct YsSequence YsSequence;

/**
 * Even and odd-composite frontiers after the generated prefix.
 */
typedef struct YsFrontier {
  size_t n;
  uint64_t even_low;
  uint64_t even_high;
  uint64_t odd_composite_low;
  uint64_t odd_composite_high;
} YsFrontier;

typedef struct YsHypothesisSummary {
  size_t first_index;
  size_t last_index;
  size_t windows;
  size_t violations;
  /**
   * Index of the first violation, or 0 when there is none.
   */
  size_t first_violation;
} YsHypothesisSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code. Never NULL; do not free.
 */
const char *ys_status_message(enum YsStatus status);

/**
 * Detail of the last failure on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *ys_last_error_message(void);

/**
 * Creates a sequence from `len` initial terms over `domain`
 * (`YS_DOMAIN_ALL` or `YS_DOMAIN_ODD`).
 *
 * # Safety
 * `start` must point to `len` readable values; `out` must be writable.
 */
enum YsStatus ys_sequence_new(const uint64_t *start,
                              size_t len,
                              uint32_t domain,
                              struct YsSequence **out);

/**
 * Creates the standard sequence starting 1, 2, 3.
 *
 * # Safety
 * `out` must be writable.
 */
enum YsStatus ys_sequence_default(struct YsSequence **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `seq` must come from `ys_sequence_new` or `ys_sequence_default` and not
 * have been freed.
 */
void ys_sequence_free(struct YsSequence *seq);

/**
 * Generates terms until the sequence has at least `n`.
 *
 * # Safety
 * `seq` must be a live handle.
 */
enum YsStatus ys_sequence_extend(struct YsSequence *seq, size_t n);

/**
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum YsStatus ys_sequence_len(const struct YsSequence *seq, size_t *out);

/**
 * The 1-based term `a(n)`.
 *
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum YsStatus ys_sequence_term(const struct YsSequence *seq, size_t n, uint64_t *out);

/**
 * Copies up to `capacity` terms into `buf` and stores the total number of
 * terms in `written`. Returns `BufferTooSmall` when the copy was truncated.
 *
 * # Safety
 * `seq` must be a live handle; `buf` must hold `capacity` values (it may be
 * NULL when `capacity` is 0); `written` must be writable.
 */
enum YsStatus ys_sequence_copy_terms(const struct YsSequence *seq,
                                     uint64_t *buf,
                                     size_t capacity,
                                     size_t *written);

/**
 * The index `n` with `a(n) = value`, if it is in the generated prefix.
 *
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum YsStatus ys_sequence_position(const struct YsSequence *seq, uint64_t value, size_t *out);

/**
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum YsStatus ys_sequence_frontier(const struct YsSequence *seq, struct YsFrontier *out);

/**
 * Checks the alternation structure from index `start` to the end of the
 * generated prefix.
 *
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum YsStatus ys_sequence_check_hypothesis_a(const struct YsSequence *seq,
                                             size_t start,
                                             struct YsHypothesisSummary *out);

/**
 * Fixed points `n <= limit`, copied like `ys_sequence_copy_terms`.
 *
 * # Safety
 * As for `ys_sequence_copy_terms`.
 */
enum YsStatus ys_sequence_fixed_points(const struct YsSequence *seq,
                                       size_t limit,
                                       uint64_t *buf,
                                       size_t capacity,
                                       size_t *written);

/**
 * Number of primes `<= x`.
 *
 * # Safety
 * `out` must be writable.
 */
enum YsStatus ys_prime_pi(uint64_t x, uint64_t *out);

/**
 * Least odd prime that does not divide `j`; 0 for `j = 0`.
 */
uint64_t ys_least_odd_prime_not_dividing(uint64_t j);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* YELLOWSTONE_H */
