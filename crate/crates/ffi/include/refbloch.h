#ifndef REFBLOCH_H
#define REFBLOCH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RbStatus {
  RB_STATUS_OK = 0,
  RB_STATUS_NULL_POINTER = 1,
  RB_STATUS_INVALID_ARGUMENT = 2,
  RB_STATUS_INVALID_FIELD = 3,
  RB_STATUS_PRECISION_EXHAUSTED = 4,
  /*
   A verification ran and some check failed; the report is still returned.
   */
  RB_STATUS_CHECK_FAILED = 5,
  RB_STATUS_INTERNAL = 6,
  RB_STATUS_PANIC = 7,
} RbStatus;

/*
 A finite field together with its pre-Bloch data.
 */
typedef struct RbField RbField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Copy of the last error message on this thread, or NULL if none.
 Free with `rb_string_free`.
 */
char *rb_last_error_message(void);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void rb_string_free(char *s);

/*
 Creates the field of order `q`.

 # Safety
 `out` must be a valid pointer.
 */
enum RbStatus rb_field_new(uint64_t q, struct RbField **out);

/*
 # Safety
 `field` must come from `rb_field_new` and not have been freed. NULL is ignored.
 */
void rb_field_free(struct RbField *field);

/*
 The field size `q`, or 0 for NULL.

 # Safety
 `field` must be NULL or a live handle.
 */
uint64_t rb_field_order(const struct RbField *field);

/*
 Order of the cyclic group `B(F_q)`.

 # Safety
 `field` must be a live handle and `out` a valid pointer.
 */
enum RbStatus rb_field_bloch_order(const struct RbField *field, uint64_t *out);

/*
 Invariant factors of `P(F_q)` as a JSON object.

 # Safety
 `field` must be a live handle and `out_json` a valid pointer.
 */
enum RbStatus rb_field_prebloch_json(const struct RbField *field, char **out_json);

/*
 Runs one verification suite (`lambda`, `suslin`, `constants`, `df`,
 `pb`, `eigen`) and writes its JSON report. Returns `CheckFailed` with the
 report filled in when a gating check fails.

 # Safety
 `field` must be a live handle, `suite` a NUL-terminated string and
 `out_json` a valid pointer.
 */
enum RbStatus rb_field_verify_json(const struct RbField *field, const char *suite, char **out_json);

/*
 Runs a command-line invocation (without the program name), e.g.
 `{"tower", "--base", "5", "--levels", "2"}`, and writes the JSON report.
 `BLOCH_MAX_Q` is honoured. The report is written for `Ok` and `CheckFailed`.

 # Safety
 `argv` must point to `argc` NUL-terminated strings; `out_json` must be valid.
 */
enum RbStatus rb_run_json(const char *const *argv, size_t argc, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REFBLOCH_H */
