#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skew_euler {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Physical input outside the domain of the square-root transform (rho <= 0 or p <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// |phi1| too small: the ratio entries phi4/phi1 and phi2/phi1 are undefined.
class VacuumError : public Error {
 public:
  explicit VacuumError(const std::string& what, std::size_t node = npos)
      : Error(what), node_(node) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

/// Invalid gas model (gamma outside the admissible range, alpha2 <= 0).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Field / operator shape mismatch, or matrix dimension mismatch.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Grid too small for the requested SBP operator.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Boundary normal that is not of unit length.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values produced during time integration.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double time)
      : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Configuration error, carrying the offending line (0 when not line-specific).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace skew_euler
