#include "sosl1/sosl1.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "sosl1/approx.hpp"
#include "sosl1/error.hpp"
#include "sosl1/io.hpp"

struct sosl1_polynomial {
  sosl1::Polynomial value;
};

struct sosl1_result {
  sosl1::ApproximationResult value;
};

struct sosl1_sos_check {
  sosl1::SosCheck value;
  sosl1::Polynomial g;
  int half_degree;
};

struct sosl1_baseline {
  sosl1::UniformPerturbation value;
  sosl1::Polynomial f;
  int half_degree;
};

namespace {

thread_local std::string last_error;

sosl1_status fail(sosl1_status s, const char* msg) {
  last_error = msg;
  return s;
}

template <class F>
sosl1_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return SOSL1_OK;
  } catch (const sosl1::ParseError& e) {
    return fail(SOSL1_ERR_PARSE, e.what());
  } catch (const sosl1::DegreeError& e) {
    return fail(SOSL1_ERR_DEGREE, e.what());
  } catch (const sosl1::SolverError& e) {
    return fail(SOSL1_ERR_SOLVER, e.what());
  } catch (const sosl1::InvalidArgument& e) {
    return fail(SOSL1_ERR_INVALID_ARGUMENT, e.what());
  } catch (const sosl1::Error& e) {
    return fail(SOSL1_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SOSL1_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SOSL1_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SOSL1_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* what) {
  if (!p) throw sosl1::InvalidArgument(std::string(what) + " must not be NULL");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void check_format(sosl1_format fmt) {
  if (fmt != SOSL1_FORMAT_TABLE && fmt != SOSL1_FORMAT_JSON) {
    throw sosl1::InvalidArgument("unknown output format");
  }
}

sosl1::ApproxOptions to_options(const sosl1_options* opts) {
  sosl1::ApproxOptions o;
  if (!opts) return o;
  if (!(opts->gap_tol > 0.0) || !(opts->feas_tol > 0.0)) {
    throw sosl1::InvalidArgument("tolerances must be positive");
  }
  if (opts->max_iter < 1) throw sosl1::InvalidArgument("max_iter must be at least 1");
  o.solver.gap_tol = opts->gap_tol;
  o.solver.feas_tol = opts->feas_tol;
  o.solver.max_iter = opts->max_iter;
  o.form = opts->full_form ? sosl1::Form::Full : sosl1::Form::Reduced;
  return o;
}

}  // namespace

extern "C" {

void sosl1_options_default(sosl1_options* opts) {
  if (!opts) return;
  const sosl1::sdp::SolverOptions d;
  opts->gap_tol = d.gap_tol;
  opts->feas_tol = d.feas_tol;
  opts->max_iter = d.max_iter;
  opts->full_form = 0;
}

const char* sosl1_version(void) { return "0.1.0"; }

const char* sosl1_status_string(sosl1_status s) {
  switch (s) {
    case SOSL1_OK:
      return "ok";
    case SOSL1_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case SOSL1_ERR_PARSE:
      return "parse error";
    case SOSL1_ERR_DEGREE:
      return "degree error";
    case SOSL1_ERR_SOLVER:
      return "solver failure";
    case SOSL1_ERR_IO:
      return "i/o error";
    case SOSL1_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* sosl1_last_error(void) { return last_error.c_str(); }

void sosl1_string_free(char* s) { std::free(s); }

sosl1_status sosl1_polynomial_parse(const char* text, sosl1_polynomial** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new sosl1_polynomial{sosl1::io::parse_polynomial(text)};
  });
}

sosl1_status sosl1_polynomial_read_file(const char* path, sosl1_polynomial** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new sosl1_polynomial{sosl1::io::read_polynomial_file(path)};
  });
}

sosl1_status sosl1_polynomial_from_terms(size_t nvars, size_t nterms, const double* coeffs,
                                         const int* exps, sosl1_polynomial** out) {
  return guarded([&] {
    require(out, "out");
    if (nvars == 0) throw sosl1::InvalidArgument("nvars must be positive");
    if (nterms > 0) {
      require(coeffs, "coeffs");
      require(exps, "exps");
    }
    std::vector<std::pair<sosl1::Monomial, double>> terms;
    for (size_t k = 0; k < nterms; ++k) {
      std::vector<int> e(exps + k * nvars, exps + (k + 1) * nvars);
      terms.emplace_back(sosl1::Monomial(std::move(e)), coeffs[k]);
    }
    *out = new sosl1_polynomial{sosl1::Polynomial(nvars, std::move(terms))};
  });
}

sosl1_status sosl1_polynomial_motzkin_like(sosl1_polynomial** out) {
  return guarded([&] {
    require(out, "out");
    *out = new sosl1_polynomial{sosl1::motzkin_like()};
  });
}

size_t sosl1_polynomial_nvars(const sosl1_polynomial* p) { return p ? p->value.nvars() : 0; }

size_t sosl1_polynomial_nterms(const sosl1_polynomial* p) { return p ? p->value.size() : 0; }

int sosl1_polynomial_degree(const sosl1_polynomial* p) { return p ? p->value.degree() : 0; }

double sosl1_polynomial_l1_norm(const sosl1_polynomial* p) { return p ? p->value.l1_norm() : 0.0; }

sosl1_status sosl1_polynomial_eval(const sosl1_polynomial* p, const double* point, size_t n,
                                   double* out) {
  return guarded([&] {
    require(p, "polynomial");
    require(out, "out");
    if (n > 0) require(point, "point");
    *out = p->value.eval(std::span<const double>(point, n));
  });
}

sosl1_status sosl1_polynomial_serialize(const sosl1_polynomial* p, sosl1_format fmt, char** out) {
  return guarded([&] {
    require(p, "polynomial");
    require(out, "out");
    check_format(fmt);
    *out = copy_string(fmt == SOSL1_FORMAT_JSON ? sosl1::io::to_json(p->value)
                                                : sosl1::io::to_text(p->value));
  });
}

void sosl1_polynomial_free(sosl1_polynomial* p) { delete p; }

sosl1_status sosl1_approximate(const sosl1_polynomial* f, int d, const sosl1_options* opts,
                               sosl1_result** out) {
  return guarded([&] {
    require(f, "polynomial");
    require(out, "out");
    *out = new sosl1_result{sosl1::best_l1_sos_approximation(f->value, d, to_options(opts))};
  });
}

sosl1_status sosl1_result_from_json(const char* text, sosl1_result** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new sosl1_result{sosl1::io::result_from_json(text)};
  });
}

double sosl1_result_rho(const sosl1_result* r) { return r ? r->value.rho : 0.0; }

size_t sosl1_result_lambda(const sosl1_result* r, double* out, size_t cap) {
  if (!r) return 0;
  const auto& l = r->value.lambda;
  for (size_t i = 0; out && i < cap && i < l.size(); ++i) out[i] = l[i];
  return l.size();
}

int sosl1_result_iterations(const sosl1_result* r) {
  return r ? r->value.solver_report.iterations : 0;
}

double sosl1_result_gap(const sosl1_result* r) { return r ? r->value.solver_report.gap : 0.0; }

size_t sosl1_result_num_warnings(const sosl1_result* r) {
  return r ? r->value.warnings.size() : 0;
}

sosl1_status sosl1_result_g(const sosl1_result* r, sosl1_polynomial** out) {
  return guarded([&] {
    require(r, "result");
    require(out, "out");
    *out = new sosl1_polynomial{r->value.g};
  });
}

sosl1_status sosl1_result_render(const sosl1_result* r, sosl1_format fmt, char** out) {
  return guarded([&] {
    require(r, "result");
    require(out, "out");
    check_format(fmt);
    *out = copy_string(fmt == SOSL1_FORMAT_JSON ? sosl1::io::result_to_json(r->value)
                                                : sosl1::io::render_result(r->value));
  });
}

sosl1_status sosl1_result_verify(const sosl1_result* r, const sosl1_polynomial* f, int d,
                                 sosl1_format fmt, int* all_passed, char** report) {
  return guarded([&] {
    require(r, "result");
    require(f, "polynomial");
    check_format(fmt);
    const auto v = sosl1::verify(r->value, f->value, d);
    if (all_passed) *all_passed = v.all_passed() ? 1 : 0;
    if (report) {
      *report = copy_string(fmt == SOSL1_FORMAT_JSON ? sosl1::io::verification_to_json(v)
                                                     : sosl1::io::render_verification(v));
    }
  });
}

void sosl1_result_free(sosl1_result* r) { delete r; }

sosl1_status sosl1_check_sos(const sosl1_polynomial* g, int d, const sosl1_options* opts,
                             sosl1_sos_check** out) {
  return guarded([&] {
    require(g, "polynomial");
    require(out, "out");
    const auto o = to_options(opts);
    *out = new sosl1_sos_check{sosl1::is_sos(g->value, d, o.solver), g->value, d};
  });
}

int sosl1_sos_check_is_sos(const sosl1_sos_check* c) { return c && c->value.is_sos ? 1 : 0; }

size_t sosl1_sos_check_num_squares(const sosl1_sos_check* c) {
  return c && c->value.certificate ? c->value.certificate->squares.size() : 0;
}

double sosl1_sos_check_witness_value(const sosl1_sos_check* c) {
  return c ? c->value.witness_value : 0.0;
}

sosl1_status sosl1_sos_check_render(const sosl1_sos_check* c, sosl1_format fmt, char** out) {
  return guarded([&] {
    require(c, "check");
    require(out, "out");
    check_format(fmt);
    *out = copy_string(fmt == SOSL1_FORMAT_JSON
                           ? sosl1::io::sos_check_to_json(c->value, c->g, c->half_degree)
                           : sosl1::io::render_sos_check(c->value));
  });
}

void sosl1_sos_check_free(sosl1_sos_check* c) { delete c; }

sosl1_status sosl1_uniform_baseline(const sosl1_polynomial* f, int d, const sosl1_options* opts,
                            sosl1_baseline** out) {
  return guarded([&] {
    require(f, "polynomial");
    require(out, "out");
    const auto o = to_options(opts);
    *out = new sosl1_baseline{sosl1::uniform_sos_perturbation(f->value, d, o.solver), f->value, d};
  });
}

double sosl1_baseline_epsilon(const sosl1_baseline* b) { return b ? b->value.epsilon : 0.0; }

sosl1_status sosl1_baseline_render(const sosl1_baseline* b, sosl1_format fmt, char** out) {
  return guarded([&] {
    require(b, "baseline");
    require(out, "out");
    check_format(fmt);
    *out = copy_string(fmt == SOSL1_FORMAT_JSON
                           ? sosl1::io::uniform_to_json(b->value, b->f, b->half_degree)
                           : sosl1::io::render_uniform(b->value, b->half_degree));
  });
}

void sosl1_baseline_free(sosl1_baseline* b) { delete b; }

sosl1_status sosl1_reproduce_table1(const sosl1_options* opts, sosl1_format fmt, char** out) {
  return guarded([&] {
    require(out, "out");
    check_format(fmt);
    const auto o = to_options(opts);
    const auto f = sosl1::motzkin_like();
    std::vector<sosl1::ApproximationResult> results;
    std::vector<sosl1::io::TableRow> rows;
    for (int d : {3, 4, 5}) {
      results.push_back(sosl1::best_l1_sos_approximation(f, d, o));
      rows.push_back({d, results.back().lambda, results.back().rho});
    }
    *out = copy_string(fmt == SOSL1_FORMAT_JSON ? sosl1::io::results_to_json(results)
                                                : sosl1::io::render_table(rows));
  });
}

}  // extern "C"
