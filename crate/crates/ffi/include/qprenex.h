#ifndef QPRENEX_H
#define QPRENEX_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>

typedef enum QpFormat {
  QP_FORMAT_FQBF = 0,
  QP_FORMAT_QCIR = 1,
  QP_FORMAT_QDIMACS = 2,
} QpFormat;

typedef enum QpFreeVariables {
  QP_FREE_VARIABLES_EXISTS = 0,
  QP_FREE_VARIABLES_FORALL = 1,
  QP_FREE_VARIABLES_FREE = 2,
} QpFreeVariables;

typedef enum QpMode {
  QP_MODE_SAT = 0,
  QP_MODE_VALID = 1,
  QP_MODE_MC = 2,
} QpMode;

typedef enum QpStatus {
  QP_STATUS_OK = 0,
  QP_STATUS_NULL_ARGUMENT = 1,
  QP_STATUS_INVALID_UTF8 = 2,
  QP_STATUS_PARSE_ERROR = 3,
  QP_STATUS_INVALID_ARGUMENT = 4,
  QP_STATUS_NOT_PRENEX = 5,
  QP_STATUS_REFUSED = 6,
  QP_STATUS_SEMANTICS_ERROR = 7,
  QP_STATUS_PANIC = 8,
} QpStatus;

/**
 * Opaque formula handle, together with its operator declarations.
 */
typedef struct QpFormula QpFormula;

typedef struct QpMetrics {
  size_t length;
  size_t qdepth;
  size_t nblock;
  size_t nbvar;
  bool is_prenex;
} QpMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `text`. On success `*out` receives a handle to release with
 * `qp_formula_free`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QpStatus qp_parse(const char *text, bool allow_internal_names, struct QpFormula **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `f` must come from this library and not be used afterwards.
 */
void qp_formula_free(struct QpFormula *f);

/**
 * Prints the formula with its declarations in the input syntax.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum QpStatus qp_formula_print(const struct QpFormula *f, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void qp_string_free(char *s);

/**
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum QpStatus qp_formula_metrics(const struct QpFormula *f, struct QpMetrics *out);

/**
 * Transforms `f` for `mode` into a new handle.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum QpStatus qp_prenex(const struct QpFormula *f, enum QpMode mode, struct QpFormula **out);

/**
 * Writes a prenex formula in `format`. `free` says how free variables are
 * bound in QCIR and QDIMACS; it is ignored for `.fqbf` text.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum QpStatus qp_export(const struct QpFormula *f,
                        enum QpFormat format,
                        enum QpFreeVariables free,
                        char **out);

/**
 * Decides whether `a` and `b` agree under the relation of `mode`:
 * equisatisfiable, equivalid or equivalent. `cap` bounds the variables the
 * oracle accepts; 0 selects the default.
 *
 * # Safety
 * `a` and `b` must be live handles and `agree` a valid pointer.
 */
enum QpStatus qp_check(const struct QpFormula *a,
                       const struct QpFormula *b,
                       enum QpMode mode,
                       size_t cap,
                       bool *agree);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *qp_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QPRENEX_H */
