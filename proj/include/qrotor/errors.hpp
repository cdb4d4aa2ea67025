#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qrotor {

/// Bad argument to a library function (non-positive length, out-of-range index, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested LG mode is outside what the operation supports (p != 0 traps).
class UnsupportedMode : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Eigensolver or fitter did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::string diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

/// A ">>" validity inequality failed. Carries the offending ratio.
class ValidityError : public std::runtime_error {
 public:
  ValidityError(const std::string& what, double ratio)
      : std::runtime_error(what), ratio_(ratio) {}
  double ratio() const noexcept { return ratio_; }

 private:
  double ratio_;
};

/// Configuration file problem; `field()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what),
        field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace qrotor
