#ifndef TCURVE_H
#define TCURVE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; 2, 3 and 4 match the command-line exit codes.
 */
typedef enum TcStatus {
  TC_STATUS_OK = 0,
  TC_STATUS_NULL_ARGUMENT = 1,
  TC_STATUS_INVALID_INPUT = 2,
  TC_STATUS_INVARIANT_VIOLATION = 3,
  TC_STATUS_BUDGET_EXCEEDED = 4,
  TC_STATUS_BUFFER_TOO_SMALL = 5,
  TC_STATUS_PANIC = 6,
} TcStatus;

/**
 * A classifier bound to one triangulation, with its own scratch space.
 * Not safe to share between threads; create one per thread.
 */
typedef struct TcClassifier TcClassifier;

typedef struct TcReport TcReport;

typedef struct TcTriangulation TcTriangulation;

/**
 * Numeric part of a classification; the scheme string is read with
 * [`tc_classifier_scheme`].
 */
typedef struct TcClassification {
  uint32_t oval_count;
  uint32_t region_count;
  bool has_pseudoline;
} TcClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, empty after a success.
 * Valid until the next call on the same thread.
 */
const char *tc_last_error(void);

/**
 * Parses triangulation JSON; `validate = false` skips the unimodularity
 * checks.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum TcStatus tc_triangulation_from_json(const char *json,
                                         bool validate,
                                         struct TcTriangulation **out);

/**
 * Loads `bowtie8`, `fig2-middle8`, `fig2-right8` or `delaunay-<d>`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a writable pointer.
 */
enum TcStatus tc_triangulation_builtin(const char *name, struct TcTriangulation **out);

/**
 * Degree of `t`, or 0 when `t` is null.
 *
 * # Safety
 * `t` must be null or a live handle.
 */
uint32_t tc_triangulation_degree(const struct TcTriangulation *t);

/**
 * # Safety
 * `t` must be null or a handle not yet freed.
 */
void tc_triangulation_free(struct TcTriangulation *t);

/**
 * # Safety
 * `t` must be a live handle and `out` a writable pointer.
 */
enum TcStatus tc_classifier_new(const struct TcTriangulation *t, struct TcClassifier **out);

/**
 * Classifies one sign string.
 *
 * # Safety
 * `c` must be a live handle, `signs` a NUL-terminated string and `out` null
 * or writable.
 */
enum TcStatus tc_classifier_classify(struct TcClassifier *c,
                                     const char *signs,
                                     struct TcClassification *out);

/**
 * Copies the scheme of the last successful classification into `buf`
 * with a trailing NUL. `len` receives the string length without the NUL;
 * when `cap <= len` nothing is copied and `BufferTooSmall` is returned.
 *
 * # Safety
 * `c` must be a live handle, `buf` null or writable for `cap` bytes, `len`
 * null or writable.
 */
enum TcStatus tc_classifier_scheme(const struct TcClassifier *c,
                                   char *buf,
                                   size_t cap,
                                   size_t *len);

/**
 * # Safety
 * `c` must be null or a handle not yet freed.
 */
void tc_classifier_free(struct TcClassifier *c);

/**
 * Classifies sign indices `start..end`; `end = UINT64_MAX` means the end of
 * the index space.
 *
 * # Safety
 * `t` must be a live handle and `out` a writable pointer.
 */
enum TcStatus tc_sweep(const struct TcTriangulation *t,
                       uint64_t start,
                       uint64_t end,
                       uint32_t workers,
                       bool raw,
                       struct TcReport **out);

/**
 * Classifies `n` indices drawn from the stream keyed by `seed`.
 *
 * # Safety
 * `t` must be a live handle and `out` a writable pointer.
 */
enum TcStatus tc_sample(const struct TcTriangulation *t,
                        uint64_t n,
                        uint64_t seed,
                        uint32_t workers,
                        bool raw,
                        struct TcReport **out);

/**
 * Number of classified sign vectors, or 0 when `r` is null.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
uint64_t tc_report_total(const struct TcReport *r);

/**
 * Number of distinct schemes, or 0 when `r` is null.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
size_t tc_report_scheme_count(const struct TcReport *r);

/**
 * Copies the oval-count histogram (bins `0..=M(d)`) into `buf`. `len`
 * receives the bin count; `BufferTooSmall` when `cap` is less.
 *
 * # Safety
 * `r` must be a live handle, `buf` null or writable for `cap` values, `len`
 * null or writable.
 */
enum TcStatus tc_report_histogram(const struct TcReport *r, uint64_t *buf, size_t cap, size_t *len);

/**
 * The report as JSON Lines in a new string, freed with
 * [`tc_string_free`].
 *
 * # Safety
 * `r` must be a live handle and `out` a writable pointer.
 */
enum TcStatus tc_report_jsonl(const struct TcReport *r, char **out);

/**
 * # Safety
 * `r` must be null or a handle not yet freed.
 */
void tc_report_free(struct TcReport *r);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void tc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TCURVE_H */
