#ifndef KKSOERGEL_H
#define KKSOERGEL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KksStatus {
  KKS_STATUS_OK = 0,
  KKS_STATUS_NULL_POINTER = 1,
  KKS_STATUS_INVALID_UTF8 = 2,
  KKS_STATUS_USAGE = 3,
  KKS_STATUS_PARSE = 4,
  KKS_STATUS_NOT_PRIME = 5,
  KKS_STATUS_NOT_FINITE_TYPE = 6,
  /**
   * The report was produced but one of its checks failed.
   */
  KKS_STATUS_CHECK_FAILED = 7,
  /**
   * Any other error raised during a computation.
   */
  KKS_STATUS_MATH = 8,
  KKS_STATUS_PANIC = 9,
} KksStatus;

/**
 * An adjoint root datum of finite type.
 */
typedef struct KksDatum KksDatum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, as a static NUL-terminated string.
 */
const char *kks_version(void);

/**
 * Message describing the last failure on this thread, or the error line
 * printed by [`kks_run_cli`]; empty otherwise. Valid until the next
 * library call on the same thread.
 */
const char *kks_last_error(void);

/**
 * Looks up a named preset (`A1`, `A1xA1`, `A2`, `B2`, `A3`, `G2`).
 *
 * # Safety
 * `name` must be a valid C string and `out` a writable pointer.
 */
enum KksStatus kks_datum_preset(const char *name, struct KksDatum **out);

/**
 * Parses a datum from `{"cartan": [[...]]}` JSON.
 *
 * # Safety
 * `json` must be a valid C string and `out` a writable pointer.
 */
enum KksStatus kks_datum_from_json(const char *json, struct KksDatum **out);

/**
 * Releases a datum. Null is ignored.
 *
 * # Safety
 * `d` must come from this library and not be used afterwards.
 */
void kks_datum_free(struct KksDatum *d);

/**
 * # Safety
 * `d` must be a live datum and `out` a writable pointer.
 */
enum KksStatus kks_datum_rank(const struct KksDatum *d, size_t *out);

/**
 * Order of the Weyl group.
 *
 * # Safety
 * `d` must be a live datum and `out` a writable pointer.
 */
enum KksStatus kks_datum_order(const struct KksDatum *d, size_t *out);

/**
 * Runs one command (`psi`, `steinberg`, `coinvariants`, `catalog`, ...)
 * on `d` and writes its JSON report to `out_json`.
 *
 * `field` (`Q` or `Fp:P`) and `word` (`1,2,1`) may be null; a negative
 * `max_length` selects the command's default bound. Returns
 * `CheckFailed` with the report still written when a check fails.
 *
 * # Safety
 * `d` must be a live datum, string arguments valid C strings or null
 * where allowed, and `out_json` a writable pointer.
 */
enum KksStatus kks_report(const struct KksDatum *d,
                          const char *command,
                          const char *field,
                          const char *word,
                          uint64_t seed,
                          int64_t max_length,
                          char **out_json);

/**
 * Runs the command-line front end on `argv` (including the program name)
 * and returns its standard output and exit code.
 *
 * # Safety
 * `argv` must point to `argc` valid C strings; the output pointers must be
 * writable.
 */
enum KksStatus kks_run_cli(size_t argc,
                           const char *const *argv,
                           char **out_stdout,
                           int32_t *out_code);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void kks_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KKSOERGEL_H */
