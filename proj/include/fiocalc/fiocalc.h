/* Copyright 2026 The fiocalc Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the fiocalc core. Every call returns a status code; on
 * failure fiocalc_last_error() describes the problem. Strings returned by the
 * library stay valid until the next call on the same session.
 */

#ifndef FIOCALC_H
#define FIOCALC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define FIOCALC_API __declspec(dllexport)
#else
#define FIOCALC_API __attribute__((visibility("default")))
#endif

typedef enum fiocalc_status {
  FIOCALC_OK = 0,
  FIOCALC_E_USAGE = 1,
  FIOCALC_E_VALIDATION = 2,
  FIOCALC_E_PARSE = 3,
  FIOCALC_E_DOMAIN = 4,
  FIOCALC_E_CONVERGENCE = 5,
  FIOCALC_E_BRANCH = 6,
  FIOCALC_E_QUADRATURE = 7,
  FIOCALC_E_CONFIG = 8,
  FIOCALC_E_INTERNAL = 9
} fiocalc_status;

typedef struct fiocalc_session fiocalc_session;

FIOCALC_API const char* fiocalc_version(void);
FIOCALC_API const char* fiocalc_status_name(int status);

FIOCALC_API int fiocalc_session_create(fiocalc_session** out);
FIOCALC_API void fiocalc_session_destroy(fiocalc_session* s);
FIOCALC_API const char* fiocalc_last_error(const fiocalc_session* s);

/* n <= 0 falls back to FIOCALC_THREADS, then 1. */
FIOCALC_API int fiocalc_set_threads(fiocalc_session* s, int n);
FIOCALC_API int fiocalc_set_seed(fiocalc_session* s, uint64_t seed);

/* Runs a subcommand (analyze, stationary-phase, symbol, compose, oracle,
 * validate) on config text. *report receives the JSON report, *exit_code the
 * process exit code the command line tool would use. The status is FIOCALC_OK
 * whenever a report was produced, including failed checks. */
FIOCALC_API int fiocalc_run(fiocalc_session* s, const char* command, const char* config_text,
                            const char** report, int* exit_code);

/* Parses an expression over `layout` ("x:2,theta:1*" with * marking frequency
 * groups) and evaluates it at the complex point (re[k], im[k]). */
FIOCALC_API int fiocalc_expr_eval(fiocalc_session* s, const char* source, const char* layout, const double* re,
                                  const double* im, size_t count, double* out_re, double* out_im);

/* Canonical printed form of an expression. */
FIOCALC_API int fiocalc_expr_print(fiocalc_session* s, const char* source, const char* layout, const char** out);

/* r with r^2 det((1/i) H) = 1 for a complex symmetric n x n matrix, row major. */
FIOCALC_API int fiocalc_inv_sqrt_det(fiocalc_session* s, const double* h_re, const double* h_im, int n,
                                     double* out_re, double* out_im);

FIOCALC_API double fiocalc_composed_order(double m1, double m2, int excess);

#ifdef __cplusplus
}
#endif

#endif /* FIOCALC_H */
