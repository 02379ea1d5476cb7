#pragma once

#include <optional>
#include <ostream>
#include <string>

namespace sosl1::cli {

enum class Command { Approx, CheckSos, Baseline, ReproduceTable1, Verify };
enum class OutputFormat { Table, Json };

struct RunConfig {
  Command command = Command::Approx;
  std::string input;
  /// Result JSON for `verify`.
  std::string result;
  int degree = 0;
  OutputFormat format = OutputFormat::Table;
  std::optional<std::string> out;
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
  bool full_form = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitSolver = 2;

/// Runs one command. Reports go to `out` (or the --out file), diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into a RunConfig and runs it.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sosl1::cli
