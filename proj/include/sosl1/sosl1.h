/*
 * C interface to the sosl1 library: best l1 approximation of a real
 * polynomial by a sum of squares, SOS membership tests and the uniform
 * perturbation baseline.
 *
 * All objects are opaque handles released with the matching *_free call.
 * Every fallible function returns a sosl1_status; on failure the message is
 * available from sosl1_last_error() on the calling thread until the next call.
 * Strings returned through char** are owned by the caller and released with
 * sosl1_string_free().
 */
#ifndef SOSL1_H
#define SOSL1_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(SOSL1_BUILDING_LIBRARY)
#    define SOSL1_API __declspec(dllexport)
#  else
#    define SOSL1_API __declspec(dllimport)
#  endif
#else
#  define SOSL1_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sosl1_status {
  SOSL1_OK = 0,
  SOSL1_ERR_INVALID_ARGUMENT = 1,
  SOSL1_ERR_PARSE = 2,
  SOSL1_ERR_DEGREE = 3,
  SOSL1_ERR_SOLVER = 4,
  SOSL1_ERR_IO = 5,
  SOSL1_ERR_INTERNAL = 6
} sosl1_status;

typedef enum sosl1_format { SOSL1_FORMAT_TABLE = 0, SOSL1_FORMAT_JSON = 1 } sosl1_format;

typedef struct sosl1_polynomial sosl1_polynomial;
typedef struct sosl1_result sosl1_result;
typedef struct sosl1_sos_check sosl1_sos_check;
typedef struct sosl1_baseline sosl1_baseline;

typedef struct sosl1_options {
  double gap_tol;  /* default 1e-8 */
  double feas_tol; /* default 1e-8 */
  int max_iter;    /* default 200 */
  int full_form;   /* nonzero: coefficient-wise program instead of the reduced one */
} sosl1_options;

SOSL1_API void sosl1_options_default(sosl1_options* opts);

SOSL1_API const char* sosl1_version(void);
SOSL1_API const char* sosl1_status_string(sosl1_status s);
/* Empty string when the last call on this thread succeeded. */
SOSL1_API const char* sosl1_last_error(void);
SOSL1_API void sosl1_string_free(char* s);

/* Polynomials. Text or JSON input is detected from the first character. */
SOSL1_API sosl1_status sosl1_polynomial_parse(const char* text, sosl1_polynomial** out);
SOSL1_API sosl1_status sosl1_polynomial_read_file(const char* path, sosl1_polynomial** out);
/* exps holds nterms rows of nvars exponents. */
SOSL1_API sosl1_status sosl1_polynomial_from_terms(size_t nvars, size_t nterms,
                                                   const double* coeffs, const int* exps,
                                                   sosl1_polynomial** out);
/* x1^2 x2^2 (x1^2 + x2^2 - 1) + 1/27 */
SOSL1_API sosl1_status sosl1_polynomial_motzkin_like(sosl1_polynomial** out);
SOSL1_API size_t sosl1_polynomial_nvars(const sosl1_polynomial* p);
SOSL1_API size_t sosl1_polynomial_nterms(const sosl1_polynomial* p);
SOSL1_API int sosl1_polynomial_degree(const sosl1_polynomial* p);
SOSL1_API double sosl1_polynomial_l1_norm(const sosl1_polynomial* p);
SOSL1_API sosl1_status sosl1_polynomial_eval(const sosl1_polynomial* p, const double* point,
                                             size_t n, double* out);
SOSL1_API sosl1_status sosl1_polynomial_serialize(const sosl1_polynomial* p, sosl1_format fmt,
                                                  char** out);
SOSL1_API void sosl1_polynomial_free(sosl1_polynomial* p);

/* Best l1 SOS approximation of f with degree bound 2d. opts may be NULL. */
SOSL1_API sosl1_status sosl1_approximate(const sosl1_polynomial* f, int d,
                                         const sosl1_options* opts, sosl1_result** out);
/* Parses a document written by sosl1_result_render(..., SOSL1_FORMAT_JSON, ...). */
SOSL1_API sosl1_status sosl1_result_from_json(const char* text, sosl1_result** out);
SOSL1_API double sosl1_result_rho(const sosl1_result* r);
/* Copies up to cap entries of (lambda_0, ..., lambda_n); returns n + 1. */
SOSL1_API size_t sosl1_result_lambda(const sosl1_result* r, double* out, size_t cap);
SOSL1_API int sosl1_result_iterations(const sosl1_result* r);
SOSL1_API double sosl1_result_gap(const sosl1_result* r);
SOSL1_API size_t sosl1_result_num_warnings(const sosl1_result* r);
SOSL1_API sosl1_status sosl1_result_g(const sosl1_result* r, sosl1_polynomial** out);
SOSL1_API sosl1_status sosl1_result_render(const sosl1_result* r, sosl1_format fmt, char** out);
/* Recomputes every invariant of r against f. all_passed and report may be NULL. */
SOSL1_API sosl1_status sosl1_result_verify(const sosl1_result* r, const sosl1_polynomial* f,
                                           int d, sosl1_format fmt, int* all_passed,
                                           char** report);
SOSL1_API void sosl1_result_free(sosl1_result* r);

SOSL1_API sosl1_status sosl1_check_sos(const sosl1_polynomial* g, int d,
                                       const sosl1_options* opts, sosl1_sos_check** out);
SOSL1_API int sosl1_sos_check_is_sos(const sosl1_sos_check* c);
/* Number of weighted squares in the certificate; 0 when not SOS. */
SOSL1_API size_t sosl1_sos_check_num_squares(const sosl1_sos_check* c);
/* L_y(g) of the separating moment vector; 0 when SOS. */
SOSL1_API double sosl1_sos_check_witness_value(const sosl1_sos_check* c);
SOSL1_API sosl1_status sosl1_sos_check_render(const sosl1_sos_check* c, sosl1_format fmt,
                                              char** out);
SOSL1_API void sosl1_sos_check_free(sosl1_sos_check* c);

/* Smallest eps >= 0 with f + eps (1 + sum_i x_i^2d) a sum of squares. */
SOSL1_API sosl1_status sosl1_uniform_baseline(const sosl1_polynomial* f, int d,
                                      const sosl1_options* opts, sosl1_baseline** out);
SOSL1_API double sosl1_baseline_epsilon(const sosl1_baseline* b);
SOSL1_API sosl1_status sosl1_baseline_render(const sosl1_baseline* b, sosl1_format fmt,
                                             char** out);
SOSL1_API void sosl1_baseline_free(sosl1_baseline* b);

/* The Motzkin-like instance for d = 3, 4, 5. */
SOSL1_API sosl1_status sosl1_reproduce_table1(const sosl1_options* opts, sosl1_format fmt,
                                              char** out);

#ifdef __cplusplus
}
#endif

#endif /* SOSL1_H */
