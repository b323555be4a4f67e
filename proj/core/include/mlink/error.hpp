#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlink {

/// Malformed or missing input data (files, rows, schemas).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
  InputError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  /// 1-based line number of the offending row, 0 when not tied to a row.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

/// A caller-supplied parameter is out of range or inconsistent.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// An internal consistency check failed.
class InvariantError : public std::logic_error {
 public:
  explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

/// Power iteration hit its iteration cap. Carries the last iterate.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate, double residual)
      : std::runtime_error(what), last_iterate_(std::move(last_iterate)), residual_(residual) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
  double residual() const noexcept { return residual_; }

 private:
  std::vector<double> last_iterate_;
  double residual_;
};

}  // namespace mlink
