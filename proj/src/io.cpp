#include "sosl1/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "sosl1/error.hpp"

namespace sosl1::io {

namespace {

using Json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_real(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const char* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && p == end && std::isfinite(out);
}

bool parse_int(std::string_view tok, long& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const char* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && p == end;
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

Json parse_document(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line_of_offset(text, e.byte));
  }
}

// Emits j with floats in format_double. Objects holding only scalars or
// scalar arrays go on one line.
bool is_flat(const Json& j) {
  if (j.is_primitive()) return true;
  if (j.is_array()) {
    return std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
  }
  return std::all_of(j.begin(), j.end(), [](const Json& e) {
    return e.is_primitive() || (e.is_array() && e.size() <= 8 && is_flat(e));
  });
}

void emit(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::number_float:
      out += std::isfinite(j.get<double>()) ? format_double(j.get<double>()) : "null";
      return;
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      const bool flat = is_flat(j);
      out += flat ? "{" : "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += inner;
        out += Json(it.key()).dump();
        out += ": ";
        emit(it.value(), indent + 1, out);
      }
      out += flat ? "}" : "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = is_flat(j);
      out += flat ? "[" : "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += flat ? ", " : ",\n";
        if (!flat) out += inner;
        emit(j[i], indent + 1, out);
      }
      out += flat ? "]" : "\n" + pad + "]";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string dump(const Json& j) {
  std::string out;
  emit(j, 0, out);
  out += '\n';
  return out;
}

Json exps_json(const Monomial& m) {
  Json e = Json::array();
  for (int x : m.exponents()) e.push_back(x);
  return e;
}

Json poly_json(const Polynomial& f) {
  Json terms = Json::array();
  for (const auto& [m, c] : f.terms()) terms.push_back(Json{{"c", c}, {"e", exps_json(m)}});
  return Json{{"n", f.nvars()}, {"terms", std::move(terms)}};
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field \"") + key + "\"", 0);
  }
  return j.at(key);
}

double real_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw ParseError(std::string("field \"") + key + "\" must be a number", 0);
  return v.get<double>();
}

long int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) {
    throw ParseError(std::string("field \"") + key + "\" must be an integer", 0);
  }
  return v.get<long>();
}

Polynomial poly_from_json(const Json& j) {
  const long n = int_field(j, "n");
  if (n < 1) throw ParseError("\"n\" must be at least 1", 0);
  const Json& terms = field(j, "terms");
  if (!terms.is_array()) throw ParseError("\"terms\" must be an array", 0);
  Polynomial f(static_cast<std::size_t>(n));
  std::map<Monomial, std::size_t> seen;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const Json& t = terms[k];
    const std::string where = "term " + std::to_string(k + 1) + ": ";
    const double c = real_field(t, "c");
    const Json& e = field(t, "e");
    if (!e.is_array()) throw ParseError(where + "\"e\" must be an array", 0);
    if (e.size() != static_cast<std::size_t>(n)) {
      throw ParseError(where + "expected " + std::to_string(n) + " exponents, got " +
                           std::to_string(e.size()),
                       0);
    }
    std::vector<int> exps;
    for (const auto& x : e) {
      if (!x.is_number_integer() || x.get<long>() < 0) {
        throw ParseError(where + "exponents must be nonnegative integers", 0);
      }
      exps.push_back(static_cast<int>(x.get<long>()));
    }
    Monomial m(std::move(exps));
    if (!seen.emplace(m, k + 1).second) {
      throw ParseError(where + "duplicate monomial (first seen in term " +
                           std::to_string(seen[m]) + ")",
                       0);
    }
    f.add_term(m, c);
  }
  return f;
}

Json report_json(const SolverReport& s) {
  return Json{{"status", std::string(sdp::to_string(s.status))},
              {"iterations", s.iterations},
              {"gap", s.gap},
              {"feas_primal", s.feas_primal},
              {"feas_dual", s.feas_dual},
              {"primal_objective", s.primal_objective},
              {"dual_objective", s.dual_objective},
              {"message", s.message}};
}

sdp::Status status_from(const std::string& s) {
  for (auto st : {sdp::Status::Optimal, sdp::Status::MaxIterations, sdp::Status::NumericalFailure,
                  sdp::Status::Infeasible}) {
    if (sdp::to_string(st) == s) return st;
  }
  throw ParseError("unknown solver status \"" + s + "\"", 0);
}

SolverReport report_from(const Json& j) {
  SolverReport s;
  s.status = status_from(field(j, "status").get<std::string>());
  s.iterations = static_cast<int>(int_field(j, "iterations"));
  s.gap = real_field(j, "gap");
  s.feas_primal = real_field(j, "feas_primal");
  s.feas_dual = real_field(j, "feas_dual");
  s.primal_objective = real_field(j, "primal_objective");
  s.dual_objective = real_field(j, "dual_objective");
  s.message = field(j, "message").get<std::string>();
  return s;
}

Json moments_json(const MomentVector& y) {
  Json values = Json::array();
  for (std::size_t i = 0; i < y.basis().size(); ++i) {
    values.push_back(Json{{"e", exps_json(y.basis()[i])}, {"y", y[i]}});
  }
  return Json{{"n", y.nvars()}, {"order", y.order()}, {"values", std::move(values)}};
}

MomentVector moments_from(const Json& j) {
  const long n = int_field(j, "n");
  const long order = int_field(j, "order");
  if (n < 1 || order < 0) throw ParseError("invalid moment vector shape", 0);
  std::map<Monomial, double> values;
  for (const auto& v : field(j, "values")) {
    std::vector<int> e;
    for (const auto& x : field(v, "e")) e.push_back(x.get<int>());
    if (e.size() != static_cast<std::size_t>(n)) throw ParseError("moment exponent arity", 0);
    values[Monomial(std::move(e))] = real_field(v, "y");
  }
  try {
    return MomentVector::from_map(static_cast<std::size_t>(n), static_cast<int>(order), values);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), 0);
  }
}

Json matrix_json(const SymmetricMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.dim(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return Json{{"dim", m.dim()}, {"rows", std::move(rows)}};
}

SymmetricMatrix matrix_from(const Json& j) {
  const long dim = int_field(j, "dim");
  const Json& rows = field(j, "rows");
  if (dim < 1 || rows.size() != static_cast<std::size_t>(dim)) {
    throw ParseError("matrix rows do not match dim", 0);
  }
  Eigen::MatrixXd m(dim, dim);
  for (long i = 0; i < dim; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(dim)) {
      throw ParseError("matrix row " + std::to_string(i) + " has the wrong length", 0);
    }
    for (long k = 0; k < dim; ++k) m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
  }
  return SymmetricMatrix(m);
}

Json certificate_json(const SosCertificate& c) {
  Json squares = Json::array();
  for (std::size_t k = 0; k < c.squares.size(); ++k) {
    squares.push_back(Json{{"w", c.weights[k]}, {"q", poly_json(c.squares[k])}});
  }
  return Json{{"residual", c.residual}, {"squares", std::move(squares)}};
}

SosCertificate certificate_from(const Json& j) {
  SosCertificate c;
  c.residual = real_field(j, "residual");
  for (const auto& s : field(j, "squares")) {
    c.weights.push_back(real_field(s, "w"));
    c.squares.push_back(poly_from_json(field(s, "q")));
  }
  return c;
}

Json doubles(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Json result_json(const ApproximationResult& r) {
  Json warnings = Json::array();
  for (const auto& w : r.warnings) warnings.push_back(w);
  return Json{{"nvars", r.nvars},
              {"half_degree", r.half_degree},
              {"form", std::string(to_string(r.form))},
              {"lambda", doubles(r.lambda)},
              {"rho", r.rho},
              {"g", poly_json(r.g)},
              {"y_star", moments_json(r.y_star)},
              {"gram", matrix_json(r.gram)},
              {"certificate", certificate_json(r.certificate)},
              {"solver_report", report_json(r.solver_report)},
              {"warnings", std::move(warnings)}};
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string monomial_string(const Monomial& m) {
  std::string s;
  for (std::size_t i = 0; i < m.nvars(); ++i) {
    if (m[i] == 0) continue;
    if (!s.empty()) s += '*';
    s += "x" + std::to_string(i + 1);
    if (m[i] > 1) s += "^" + std::to_string(m[i]);
  }
  return s;
}

std::string poly_string(const Polynomial& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    if (s.empty()) {
      s += c < 0 ? "-" : "";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    const std::string ms = monomial_string(m);
    if (ms.empty() || std::abs(c) != 1.0) s += fmt("%.6g", std::abs(c)) + (ms.empty() ? "" : "*");
    s += ms;
  }
  return s;
}

std::string lambda_tuple(const std::vector<double>& lambda) {
  double top = 0.0;
  for (double l : lambda) top = std::max(top, std::abs(l));
  const int k = top > 0.0 ? static_cast<int>(std::floor(std::log10(top))) : 0;
  const double scale = std::pow(10.0, k);
  std::string s = "10^" + std::to_string(k) + " x (";
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (i) s += ", ";
    s += fmt("%.4f", lambda[i] / scale);
  }
  return s + ")";
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

Polynomial parse_text(std::string_view text) {
  std::size_t nvars = 0;
  bool header_seen = false;
  bool term_seen = false;
  std::vector<std::pair<Monomial, double>> terms;
  std::map<Monomial, std::size_t> first_line;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto tok = split_ws(line);

    if (tok[0] == "n") {
      if (header_seen) throw ParseError("repeated header", lineno);
      if (term_seen) throw ParseError("header must precede all terms", lineno);
      long n = 0;
      if (tok.size() != 2 || !parse_int(tok[1], n) || n < 1) {
        throw ParseError("header must be `n <count>` with count >= 1", lineno);
      }
      nvars = static_cast<std::size_t>(n);
      header_seen = true;
      continue;
    }

    double c = 0.0;
    if (!parse_real(tok[0], c)) {
      throw ParseError("malformed coefficient \"" + std::string(tok[0]) + "\"", lineno);
    }
    const std::size_t arity = tok.size() - 1;
    if (nvars == 0) {
      if (arity == 0) throw ParseError("term has no exponents", lineno);
      nvars = arity;
    }
    if (arity != nvars) {
      throw ParseError("expected " + std::to_string(nvars) + " exponents, got " +
                           std::to_string(arity),
                       lineno);
    }
    std::vector<int> exps(nvars);
    for (std::size_t i = 0; i < nvars; ++i) {
      long e = 0;
      if (!parse_int(tok[i + 1], e)) {
        throw ParseError("malformed exponent \"" + std::string(tok[i + 1]) + "\"", lineno);
      }
      if (e < 0) throw ParseError("negative exponent", lineno);
      exps[i] = static_cast<int>(e);
    }
    Monomial m(std::move(exps));
    if (auto [it, fresh] = first_line.emplace(m, lineno); !fresh) {
      throw ParseError("duplicate monomial (first seen on line " + std::to_string(it->second) + ")",
                       lineno);
    }
    terms.emplace_back(std::move(m), c);
    term_seen = true;
  }
  if (nvars == 0) throw ParseError("no header and no terms: variable count unknown", 0);
  return Polynomial(nvars, std::move(terms));
}

std::string to_text(const Polynomial& f) {
  std::string out = "n " + std::to_string(f.nvars()) + "\n";
  char buf[40];
  for (const auto& [m, c] : f.terms()) {
    std::snprintf(buf, sizeof buf, "%.17g", c);
    out += buf;
    for (int e : m.exponents()) out += " " + std::to_string(e);
    out += '\n';
  }
  return out;
}

Polynomial parse_json(std::string_view text) { return poly_from_json(parse_document(text)); }

std::string to_json(const Polynomial& f) { return dump(poly_json(f)); }

Polynomial parse_polynomial(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json(text);
  return parse_text(text);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error("error reading file: " + path);
  return ss.str();
}

Polynomial read_polynomial_file(const std::string& path) {
  return parse_polynomial(read_file(path));
}

std::string result_to_json(const ApproximationResult& r) { return dump(result_json(r)); }

std::string results_to_json(const std::vector<ApproximationResult>& rs) {
  Json arr = Json::array();
  for (const auto& r : rs) arr.push_back(result_json(r));
  return dump(Json{{"results", std::move(arr)}});
}

ApproximationResult result_from_json(std::string_view text) {
  const Json j = parse_document(text);
  ApproximationResult r;
  try {
    r.nvars = static_cast<std::size_t>(int_field(j, "nvars"));
    r.half_degree = static_cast<int>(int_field(j, "half_degree"));
    const std::string form = field(j, "form").get<std::string>();
    if (form == "reduced") {
      r.form = Form::Reduced;
    } else if (form == "full") {
      r.form = Form::Full;
    } else {
      throw ParseError("unknown form \"" + form + "\"", 0);
    }
    for (const auto& l : field(j, "lambda")) r.lambda.push_back(l.get<double>());
    r.rho = real_field(j, "rho");
    r.g = poly_from_json(field(j, "g"));
    r.y_star = moments_from(field(j, "y_star"));
    r.gram = matrix_from(field(j, "gram"));
    r.certificate = certificate_from(field(j, "certificate"));
    r.solver_report = report_from(field(j, "solver_report"));
    for (const auto& w : field(j, "warnings")) r.warnings.push_back(w.get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed result document: ") + e.what(), 0);
  }
  return r;
}

std::string sos_check_to_json(const SosCheck& c, const Polynomial& g, int half_degree) {
  Json j{{"is_sos", c.is_sos}, {"half_degree", half_degree}, {"g", poly_json(g)}};
  if (c.certificate) j["certificate"] = certificate_json(*c.certificate);
  if (c.gram) j["gram"] = matrix_json(*c.gram);
  if (c.witness) {
    j["witness"] = moments_json(*c.witness);
    j["witness_value"] = c.witness_value;
    j["witness_moment_min_eigenvalue"] = moment_matrix(*c.witness, half_degree).min_eigenvalue();
  }
  j["solver_report"] = report_json(c.solver_report);
  return dump(j);
}

std::string uniform_to_json(const UniformPerturbation& u, const Polynomial& f, int half_degree) {
  const double weight = static_cast<double>(f.nvars() + 1);
  Json j{{"nvars", f.nvars()},
         {"half_degree", half_degree},
         {"epsilon", u.epsilon},
         {"l1_distance", weight * u.epsilon},
         {"g", poly_json(u.g)},
         {"solver_report", report_json(u.solver_report)}};
  return dump(j);
}

std::string verification_to_json(const VerificationReport& v) {
  Json checks = Json::array();
  for (const auto& c : v.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"passed", c.passed},
                          {"measured", c.measured},
                          {"tolerance", c.tolerance}});
  }
  return dump(Json{{"all_passed", v.all_passed()}, {"checks", std::move(checks)}});
}

std::string render_table(const std::vector<TableRow>& rows) {
  std::vector<std::array<std::string, 3>> cells;
  cells.push_back({"d", "lambda*", "rho_d"});
  for (const auto& r : rows) {
    cells.push_back({std::to_string(r.half_degree), lambda_tuple(r.lambda), fmt("%.4e", r.rho)});
  }
  std::array<std::size_t, 3> w{0, 0, 0};
  for (const auto& c : cells) {
    for (std::size_t k = 0; k < 3; ++k) w[k] = std::max(w[k], c[k].size());
  }
  auto line = [&](const std::array<std::string, 3>& c) {
    std::string s;
    for (std::size_t k = 0; k < 3; ++k) {
      if (k) s += " | ";
      s += c[k];
      if (k < 2) s += std::string(w[k] - c[k].size(), ' ');
    }
    return s + "\n";
  };
  std::string out = line(cells[0]);
  out += std::string(w[0], '-') + "-+-" + std::string(w[1], '-') + "-+-" +
         std::string(w[2], '-') + "\n";
  for (std::size_t i = 1; i < cells.size(); ++i) out += line(cells[i]);
  return out;
}

std::string render_result(const ApproximationResult& r) {
  std::string out = render_table({{r.half_degree, r.lambda, r.rho}});
  const auto& s = r.solver_report;
  out += "\nform: " + std::string(to_string(r.form)) + "\n";
  out += "solver: " + std::string(sdp::to_string(s.status)) + ", " +
         std::to_string(s.iterations) + " iterations, gap " + fmt("%.3e", s.gap) + "\n";
  out += "certificate: " + std::to_string(r.certificate.squares.size()) + " squares, residual " +
         fmt("%.3e", r.certificate.residual) + "\n";
  out += "g = " + poly_string(r.g) + "\n";
  for (const auto& w : r.warnings) out += "warning: " + w + "\n";
  return out;
}

std::string render_sos_check(const SosCheck& c) {
  std::string out;
  if (c.is_sos) {
    out += "SOS\n";
    if (c.certificate) {
      out += "certificate: " + std::to_string(c.certificate->squares.size()) +
             " squares, residual " + fmt("%.3e", c.certificate->residual) + "\n";
      for (std::size_t k = 0; k < c.certificate->squares.size(); ++k) {
        out += "  " + fmt("%.6g", c.certificate->weights[k]) + " * (" +
               poly_string(c.certificate->squares[k]) + ")^2\n";
      }
    }
  } else {
    out += "NOT SOS\n";
    out += "witness: L_y(g) = " + fmt("%.6e", c.witness_value) + "\n";
  }
  return out;
}

std::string render_uniform(const UniformPerturbation& u, int half_degree) {
  const std::size_t n = u.g.nvars();
  std::string out = "d = " + std::to_string(half_degree) + "\n";
  out += "epsilon* = " + fmt("%.6e", u.epsilon) + "\n";
  out += "l1 distance (n+1)*epsilon* = " + fmt("%.6e", static_cast<double>(n + 1) * u.epsilon) +
         "\n";
  out += "solver: " + std::string(sdp::to_string(u.solver_report.status)) + ", " +
         std::to_string(u.solver_report.iterations) + " iterations\n";
  return out;
}

std::string render_verification(const VerificationReport& v) {
  std::string out;
  for (const auto& c : v.checks) {
    out += std::string(c.passed ? "ok   " : "FAIL ") + c.name + "  measured " +
           fmt("%.3e", c.measured) + "  tol " + fmt("%.1e", c.tolerance) + "\n";
  }
  out += v.all_passed() ? "all checks passed\n" : "some checks failed\n";
  return out;
}

}  // namespace sosl1::io
