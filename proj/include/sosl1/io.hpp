#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sosl1/approx.hpp"
#include "sosl1/polynomial.hpp"

namespace sosl1::io {

// Text form:
//
//   # comment
//   n 2
//   1.0 4 2
//   -1.0 2 2
//
// The `n` header is optional; without it the variable count is the arity of
// the first term. Blank lines and `#` comments are ignored.

/// Throws ParseError (with a 1-based line number) on malformed input.
Polynomial parse_text(std::string_view text);
/// Header plus one term per line, graded-lex order, coefficients in %.17g.
std::string to_text(const Polynomial& f);

/// {"n": int, "terms": [{"c": float, "e": [int, ...]}, ...]}
Polynomial parse_json(std::string_view text);
std::string to_json(const Polynomial& f);

/// JSON when the first non-blank character is '{', text otherwise.
Polynomial parse_polynomial(std::string_view text);
/// Throws Error when the file cannot be read.
Polynomial read_polynomial_file(const std::string& path);
std::string read_file(const std::string& path);

/// 17 significant digits, lowercase scientific ("1.6178376740406678e-02").
std::string format_double(double v);

// Result documents. Keys are emitted in a fixed order; identical inputs give
// byte-identical output.

std::string result_to_json(const ApproximationResult& r);
/// {"results": [...]} with each entry as in result_to_json.
std::string results_to_json(const std::vector<ApproximationResult>& rs);
/// Inverse of result_to_json; the solver history is not part of the document.
ApproximationResult result_from_json(std::string_view text);
std::string sos_check_to_json(const SosCheck& c, const Polynomial& g, int half_degree);
std::string uniform_to_json(const UniformPerturbation& u, const Polynomial& f, int half_degree);
std::string verification_to_json(const VerificationReport& v);

struct TableRow {
  int half_degree;
  std::vector<double> lambda;
  double rho;
};

/// d | λ* as 10^k·(…) | ρ_d, one row per entry.
std::string render_table(const std::vector<TableRow>& rows);
std::string render_result(const ApproximationResult& r);
std::string render_sos_check(const SosCheck& c);
std::string render_uniform(const UniformPerturbation& u, int half_degree);
std::string render_verification(const VerificationReport& v);

}  // namespace sosl1::io
