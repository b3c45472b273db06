#ifndef QKDV_H
#define QKDV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define QKDV_OK 0

/**
 * `qkdv_verify` ran, and at least one check failed.
 */
#define QKDV_CHECKS_FAILED 1

#define QKDV_ERR_NULL -1

#define QKDV_ERR_UTF8 -2

#define QKDV_ERR_PARSE -3

#define QKDV_ERR_CONFIG -4

#define QKDV_ERR_COMPUTE -5

#define QKDV_ERR_PANIC -6

/**
 * An operator with exact `Q(q)` coefficients.
 */
typedef struct QkdvOp QkdvOp;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *qkdv_last_error(void);

/**
 * Parses an operator over the point window `|mode| <= m_pt` with depth `k`.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
int32_t qkdv_op_parse(const char *text, int32_t m_pt, int32_t k, struct QkdvOp **out);

/**
 * Canonical text of `op`; parses back to the same operator. Null on error.
 *
 * # Safety
 * `op` must come from this library and not be freed.
 */
char *qkdv_op_to_string(const struct QkdvOp *op);

/**
 * `op^{1/n}` to depth `k`; `op` must be `D^n + ...`.
 *
 * # Safety
 * `op` must come from this library and `out` be a valid pointer.
 */
int32_t qkdv_op_nth_root(const struct QkdvOp *op, uint32_t n, int32_t k, struct QkdvOp **out);

/**
 * # Safety
 * `op` must come from this library or be null; it must not be used afterwards.
 */
void qkdv_op_free(struct QkdvOp *op);

/**
 * Runs the suite `kdv`, `mkdv`, `toda`, `poisson`, `limits` or `all` and
 * stores its JSON report in `json_out`. Returns [`QKDV_OK`] when every
 * check passes and [`QKDV_CHECKS_FAILED`] otherwise.
 *
 * # Safety
 * `suite` must be a nul-terminated string and `json_out` a valid pointer.
 */
int32_t qkdv_verify(const char *suite, uint16_t n, int32_t m_pt, char **json_out);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void qkdv_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QKDV_H */
