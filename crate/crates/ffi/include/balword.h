#ifndef BALWORD_H
#define BALWORD_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum BalwordStatus {
  BALWORD_STATUS_OK = 0,
  BALWORD_STATUS_NULL_POINTER = 1,
  BALWORD_STATUS_INVALID_UTF8 = 2,
  /**
   * The density string is not in a recognised format.
   */
  BALWORD_STATUS_PARSE = 3,
  /**
   * Well-formed input outside the supported domain.
   */
  BALWORD_STATUS_DOMAIN = 4,
  /**
   * A computed difference left the alphabet `{a, a-1}`.
   */
  BALWORD_STATUS_INVARIANT = 5,
  BALWORD_STATUS_BUFFER_TOO_SMALL = 6,
  BALWORD_STATUS_PANIC = 7,
} BalwordStatus;

/**
 * Planar balanced word of a fixed density.
 */
typedef struct BalwordWord BalwordWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `density` and stores a new word handle in `*out`.
 *
 * # Safety
 * `density` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BalwordStatus balword_word_new(const char *density, struct BalwordWord **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `word` must come from [`balword_word_new`] and not be used afterwards.
 */
void balword_word_free(struct BalwordWord *word);

/**
 * Word value at lattice point `(m, n)`.
 *
 * # Safety
 * `word` must be a live handle and `out` a valid pointer.
 */
enum BalwordStatus balword_word_bit(const struct BalwordWord *word,
                                    int64_t m,
                                    int64_t n,
                                    uint8_t *out);

/**
 * Fills `buf` row-major with the `width x height` patch anchored at `(x, y)`.
 * Row `r` holds the points with second coordinate `y + r`.
 *
 * # Safety
 * `buf` must point to at least `len` writable bytes.
 */
enum BalwordStatus balword_word_patch(const struct BalwordWord *word,
                                      int64_t x,
                                      int64_t y,
                                      uint64_t width,
                                      uint64_t height,
                                      uint8_t *buf,
                                      size_t len);

/**
 * Number of ones in the `width x height` rectangle anchored at `(x, y)`.
 *
 * # Safety
 * `word` must be a live handle and `out` a valid pointer.
 */
enum BalwordStatus balword_rect_count(const struct BalwordWord *word,
                                      int64_t x,
                                      int64_t y,
                                      uint64_t width,
                                      uint64_t height,
                                      uint64_t *out);

/**
 * Proven balance constant of the word.
 *
 * # Safety
 * `word` must be a live handle and `out` a valid pointer.
 */
enum BalwordStatus balword_balance_bound(const struct BalwordWord *word, uint64_t *out);

/**
 * Writes `len` bits of the rotation word `floor((m+1)a) - floor(ma)` for
 * `m = start, start + 1, ...` into `buf`.
 *
 * # Safety
 * `density` must be a NUL-terminated string and `buf` hold `len` bytes.
 */
enum BalwordStatus balword_sturmian_bits(const char *density,
                                         int64_t start,
                                         uint8_t *buf,
                                         size_t len);

/**
 * Static description of a status code. Unknown codes get a generic text.
 */
const char *balword_status_message(int32_t status);

/**
 * Detail of the last failure on this thread; empty after a success. The
 * pointer stays valid until the next call on the same thread.
 */
const char *balword_last_error(void);

const char *balword_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BALWORD_H */
