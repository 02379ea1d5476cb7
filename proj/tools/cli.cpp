#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "sosl1/sosl1.h"

namespace sosl1::cli {

namespace {

struct StringDeleter {
  void operator()(char* s) const { sosl1_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct PolyDeleter {
  void operator()(sosl1_polynomial* p) const { sosl1_polynomial_free(p); }
};
struct ResultDeleter {
  void operator()(sosl1_result* r) const { sosl1_result_free(r); }
};
struct CheckDeleter {
  void operator()(sosl1_sos_check* c) const { sosl1_sos_check_free(c); }
};
struct BaselineDeleter {
  void operator()(sosl1_baseline* b) const { sosl1_baseline_free(b); }
};

// Thrown with the exit code already decided.
struct Failure {
  int code;
  std::string message;
};

int exit_code(sosl1_status s) { return s == SOSL1_ERR_SOLVER ? kExitSolver : kExitUsage; }

void check(sosl1_status s, const std::string& context) {
  if (s == SOSL1_OK) return;
  throw Failure{exit_code(s), context + ": " + sosl1_status_string(s) + ": " + sosl1_last_error()};
}

sosl1_format c_format(OutputFormat f) {
  return f == OutputFormat::Json ? SOSL1_FORMAT_JSON : SOSL1_FORMAT_TABLE;
}

sosl1_options c_options(const RunConfig& c) {
  sosl1_options o;
  sosl1_options_default(&o);
  o.gap_tol = c.gap_tol;
  o.feas_tol = c.feas_tol;
  o.max_iter = c.max_iter;
  o.full_form = c.full_form ? 1 : 0;
  return o;
}

std::unique_ptr<sosl1_polynomial, PolyDeleter> load_polynomial(const std::string& path) {
  if (path.empty()) throw Failure{kExitUsage, "--input is required"};
  sosl1_polynomial* p = nullptr;
  check(sosl1_polynomial_read_file(path.c_str(), &p), path);
  return std::unique_ptr<sosl1_polynomial, PolyDeleter>(p);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitUsage, "cannot open file: " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool needs_degree(Command c) { return c != Command::ReproduceTable1; }

// Returns the report text and the exit code of a successful run.
std::pair<std::string, int> execute(const RunConfig& c) {
  if (needs_degree(c.command) && c.degree < 1) {
    throw Failure{kExitUsage, "--degree must be an integer >= 1"};
  }
  const sosl1_options opts = c_options(c);
  const sosl1_format fmt = c_format(c.format);
  char* raw = nullptr;
  int code = kExitOk;

  switch (c.command) {
    case Command::Approx: {
      auto f = load_polynomial(c.input);
      sosl1_result* r = nullptr;
      check(sosl1_approximate(f.get(), c.degree, &opts, &r), "approx");
      std::unique_ptr<sosl1_result, ResultDeleter> res(r);
      check(sosl1_result_render(res.get(), fmt, &raw), "approx");
      break;
    }
    case Command::CheckSos: {
      auto g = load_polynomial(c.input);
      sosl1_sos_check* s = nullptr;
      check(sosl1_check_sos(g.get(), c.degree, &opts, &s), "check-sos");
      std::unique_ptr<sosl1_sos_check, CheckDeleter> res(s);
      check(sosl1_sos_check_render(res.get(), fmt, &raw), "check-sos");
      break;
    }
    case Command::Baseline: {
      auto f = load_polynomial(c.input);
      sosl1_baseline* b = nullptr;
      check(sosl1_uniform_baseline(f.get(), c.degree, &opts, &b), "baseline");
      std::unique_ptr<sosl1_baseline, BaselineDeleter> res(b);
      check(sosl1_baseline_render(res.get(), fmt, &raw), "baseline");
      break;
    }
    case Command::ReproduceTable1:
      check(sosl1_reproduce_table1(&opts, fmt, &raw), "reproduce-table1");
      break;
    case Command::Verify: {
      auto f = load_polynomial(c.input);
      if (c.result.empty()) throw Failure{kExitUsage, "--result is required"};
      const std::string doc = read_text(c.result);
      sosl1_result* r = nullptr;
      check(sosl1_result_from_json(doc.c_str(), &r), c.result);
      std::unique_ptr<sosl1_result, ResultDeleter> res(r);
      int passed = 0;
      check(sosl1_result_verify(res.get(), f.get(), c.degree, fmt, &passed, &raw), "verify");
      if (!passed) code = kExitSolver;
      break;
    }
  }
  CString text(raw);
  return {std::string(text.get()), code};
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    auto [text, code] = execute(config);
    if (config.out) {
      std::ofstream f(*config.out, std::ios::binary);
      if (!f) throw Failure{kExitUsage, "cannot write file: " + *config.out};
      f << text;
      if (!f) throw Failure{kExitUsage, "error writing file: " + *config.out};
    } else {
      out << text;
    }
    if (code != kExitOk) err << "error: result failed verification\n";
    return code;
  } catch (const Failure& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Best l1 approximation of polynomials by sums of squares"};
  app.require_subcommand(1);
  RunConfig config;
  std::string format = "table";
  std::string out_path;

  auto add_solver_flags = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"table", "json"}));
    sub->add_option("--out", out_path, "Write the report to this file instead of stdout");
    sub->add_option("--gap-tol", config.gap_tol, "Relative duality gap tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--feas-tol", config.feas_tol, "Relative feasibility tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", config.max_iter, "Interior-point iteration limit")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--full-form", config.full_form,
                  "Solve the coefficient-wise program instead of the moment program");
  };
  auto add_problem_flags = [&](CLI::App* sub) {
    sub->add_option("--input", config.input, "Polynomial file (text or JSON)")->required();
    sub->add_option("--degree", config.degree, "Half degree d (SOS degree 2d)")->required();
  };

  const std::map<std::string, std::pair<Command, std::string>> commands = {
      {"approx", {Command::Approx, "Best l1 SOS approximation of degree 2d"}},
      {"check-sos", {Command::CheckSos, "Decide SOS membership; print a certificate or witness"}},
      {"baseline", {Command::Baseline, "Uniform perturbation f + eps(1 + sum x_i^2d)"}},
      {"reproduce-table1", {Command::ReproduceTable1, "Motzkin-like instance for d = 3, 4, 5"}},
      {"verify", {Command::Verify, "Re-check a result JSON against its input polynomial"}},
  };
  std::map<CLI::App*, Command> by_sub;
  for (const auto& [name, spec] : commands) {
    CLI::App* sub = app.add_subcommand(name, spec.second);
    if (spec.first != Command::ReproduceTable1) add_problem_flags(sub);
    if (spec.first == Command::Verify) {
      sub->add_option("--result", config.result, "Result JSON written by approx")->required();
    }
    add_solver_flags(sub);
    by_sub[sub] = spec.first;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  for (const auto& [sub, cmd] : by_sub) {
    if (sub->parsed()) config.command = cmd;
  }
  config.format = format == "json" ? OutputFormat::Json : OutputFormat::Table;
  if (!out_path.empty()) config.out = out_path;
  return run(config, out, err);
}

}  // namespace sosl1::cli
