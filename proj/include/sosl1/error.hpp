#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sosl1 {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched variable counts, negative degrees, bad sizes.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed polynomial or result input. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// 2d < deg f.
class DegreeError : public Error {
 public:
  using Error::Error;
};

/// Interior-point solve ended without an Optimal status.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace sosl1
