#ifndef THOMPSON_FFI_H
#define THOMPSON_FFI_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stdint.h>

typedef enum ThStatus {
  TH_STATUS_OK = 0,
  TH_STATUS_NULL_POINTER = 1,
  TH_STATUS_INVALID_UTF8 = 2,
  TH_STATUS_PARSE = 3,
  TH_STATUS_INVALID_ARGUMENT = 4,
  TH_STATUS_OUT_OF_DOMAIN = 5,
  TH_STATUS_NOT_MEMBER = 6,
  TH_STATUS_PANIC = 7,
} ThStatus;

/**
 * Opaque handle to an exact PL homeomorphism of [0, 1].
 */
typedef struct ThMap ThMap;

/**
 * Library version; static storage, do not free.
 */
const char *th_version(void);

/**
 * Copy of the calling thread's last error message, or null after a success.
 */
char *th_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void th_string_free(char *s);

/**
 * Built-in generator: `"A"`, `"B"` or `"A_{d,p}(d;p)"` for base `n`.
 *
 * # Safety
 * `name` must be a valid C string; `out` must be writable.
 */
enum ThStatus th_map_builtin(const char *name, uint32_t n, struct ThMap **out);

/**
 * Parses `{"breakpoints": [["t", "y"], ...]}`.
 *
 * # Safety
 * `json` must be a valid C string; `out` must be writable.
 */
enum ThStatus th_map_from_json(const char *json, struct ThMap **out);

/**
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum ThStatus th_map_to_json(const struct ThMap *map, char **out);

/**
 * Evaluates at the rational `x` (`"a/b"`), writing the exact image.
 *
 * # Safety
 * `map` must be a live handle, `x` a valid C string, `out` writable.
 */
enum ThStatus th_map_eval(const struct ThMap *map, const char *x, char **out);

/**
 * `outer ∘ inner`: `inner` acts first.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum ThStatus th_map_compose(const struct ThMap *outer,
                             const struct ThMap *inner,
                             struct ThMap **out);

/**
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum ThStatus th_map_inverse(const struct ThMap *map, struct ThMap **out);

/**
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum ThStatus th_map_equal(const struct ThMap *a, const struct ThMap *b, bool *out);

/**
 * Whether the map lies in F(n); `th_map_certificate` gives the reason.
 *
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum ThStatus th_map_is_member(const struct ThMap *map, uint32_t n, bool *out);

/**
 * Membership certificate for F(n) as JSON.
 *
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum ThStatus th_map_certificate(const struct ThMap *map, uint32_t n, char **out);

/**
 * # Safety
 * `map` must be null or a handle from this library, not yet freed.
 */
void th_map_free(struct ThMap *map);

/**
 * Evaluates a word such as `"A B^-1"` over the built-in generators for base `n`.
 *
 * # Safety
 * `word` must be a valid C string; `out` must be writable.
 */
enum ThStatus th_word_evaluate(const char *word, uint32_t n, struct ThMap **out);

/**
 * Cost of the built-in three-piece graphing, as an exact rational.
 *
 * # Safety
 * `out` must be writable.
 */
enum ThStatus th_graphing_cost(char **out);

/**
 * Treeing sweep of the built-in graphing up to `max_len`, as JSON.
 *
 * # Safety
 * `out` must be writable.
 */
enum ThStatus th_treeing_sweep(uint32_t max_len, uint32_t jobs, char **out);

#endif  /* THOMPSON_FFI_H */
