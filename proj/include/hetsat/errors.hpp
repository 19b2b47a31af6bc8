#pragma once

#include <stdexcept>
#include <string>

namespace hetsat {

/// An argument fell outside the domain of a geometric or probabilistic map.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical routine could not meet its tolerance. Carries the best
/// estimate it reached so callers can still report something.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double best_estimate, double error_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

/// Invalid configuration, optionally anchored to a line of the source file.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, int line = -1)
      : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace hetsat
