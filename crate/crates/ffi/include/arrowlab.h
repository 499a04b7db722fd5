#ifndef ARROWLAB_H
#define ARROWLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by every entry point.
typedef enum ArrowlabStatus {
  ARROWLAB_STATUS_OK = 0,
  // The call succeeded and the report it produced contains a failing law.
  ARROWLAB_STATUS_LAW_VIOLATION = 1,
  // Malformed definitions, unknown names, bad arguments.
  ARROWLAB_STATUS_INPUT_ERROR = 2,
  ARROWLAB_STATUS_NULL_POINTER = 3,
  ARROWLAB_STATUS_INVALID_UTF8 = 4,
  // A size cap or precondition stopped the computation.
  ARROWLAB_STATUS_UNSUPPORTED = 5,
  ARROWLAB_STATUS_PANIC = 6,
} ArrowlabStatus;

// Findings produced by a check or a suite run.
typedef struct ArrowlabReport ArrowlabReport;

// A set of named algebras, PCAs, morphisms and nuclei.
typedef struct ArrowlabWorkspace ArrowlabWorkspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The message of the last failed call on this thread; valid until the next call.
const char *arrowlab_last_error(void);

// A new empty workspace whose randomized checks use `seed`.
struct ArrowlabWorkspace *arrowlab_workspace_new(uint64_t seed);

// # Safety
// `ws` must come from [`arrowlab_workspace_new`] and not be used afterwards.
void arrowlab_workspace_free(struct ArrowlabWorkspace *ws);

// Applies a `key=value` cap such as `lambda-terms=50`.
//
// # Safety
// `ws` is a live workspace and `cap` a NUL-terminated string.
enum ArrowlabStatus arrowlab_workspace_set_cap(struct ArrowlabWorkspace *ws, const char *cap);

// Loads one JSON definition document; unnamed definitions are called `stem`.
//
// # Safety
// `ws` is a live workspace; `json` and `stem` are NUL-terminated strings.
enum ArrowlabStatus arrowlab_workspace_load_json(struct ArrowlabWorkspace *ws,
                                                 const char *json,
                                                 const char *stem);

// Runs a construction on `argc` argument names and registers the result as `name`.
//
// # Safety
// `ws` is a live workspace; `construction`, `name` and the `argc` entries of `argv` are NUL-terminated strings.
enum ArrowlabStatus arrowlab_workspace_derive(struct ArrowlabWorkspace *ws,
                                              const char *construction,
                                              const char *const *argv,
                                              size_t argc,
                                              const char *name);

// Number of elements of a named algebra or PCA.
//
// # Safety
// `ws` is a live workspace, `name` a NUL-terminated string, `out` writable.
enum ArrowlabStatus arrowlab_workspace_size(struct ArrowlabWorkspace *ws,
                                            const char *name,
                                            size_t *out);

// Checks a named object. `laws` is a comma-separated filter, or null for every applicable law.
// Returns `LawViolation` when the report contains a failure; the report is written either way.
//
// # Safety
// `ws` is a live workspace, `subject` a NUL-terminated string, `laws` null or NUL-terminated, `out` writable.
enum ArrowlabStatus arrowlab_workspace_check(struct ArrowlabWorkspace *ws,
                                             const char *subject,
                                             const char *laws,
                                             struct ArrowlabReport **out);

// Runs one generated family (`frames`, `oracles`, `lambda`, `pcas`, `tripos`, `nuclei`, `modified`),
// or all of them when `family` is null.
//
// # Safety
// `ws` is a live workspace, `family` null or NUL-terminated, `out` writable.
enum ArrowlabStatus arrowlab_run_suite(struct ArrowlabWorkspace *ws,
                                       const char *family,
                                       struct ArrowlabReport **out);

// Evaluates a closed λ-term in a named algebra; the element name is written to `out`
// and must be released with [`arrowlab_string_free`].
//
// # Safety
// `ws` is a live workspace, `algebra` and `term` NUL-terminated strings, `out` writable.
enum ArrowlabStatus arrowlab_lambda_eval(struct ArrowlabWorkspace *ws,
                                         const char *algebra,
                                         const char *term,
                                         char **out);

// 0 all pass, 1 some law failed, 2 inconclusive without failures; -1 for a null report.
//
// # Safety
// `report` is null or a live report.
int32_t arrowlab_report_status(const struct ArrowlabReport *report);

// Number of findings, 0 for a null report.
//
// # Safety
// `report` is null or a live report.
size_t arrowlab_report_len(const struct ArrowlabReport *report);

// The structured JSON form of a report; release with [`arrowlab_string_free`].
//
// # Safety
// `report` is a live report and `out` writable.
enum ArrowlabStatus arrowlab_report_json(const struct ArrowlabReport *report, char **out);

// # Safety
// `report` must come from this library and not be used afterwards.
void arrowlab_report_free(struct ArrowlabReport *report);

// # Safety
// `s` must be a string returned by this library, or null.
void arrowlab_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARROWLAB_H */
