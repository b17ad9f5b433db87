#pragma once

#include <stdexcept>
#include <string>

namespace riskgp {

/// Argument outside the mathematical domain of an operation (e.g. omega not in [0,1]).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Violated precondition or type invariant.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A printed closed form is singular at the requested point.
class DegenerateCaseError : public ContractError {
 public:
  using ContractError::ContractError;
};

/// Numerical procedure did not reach its tolerance; carries the best estimate.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double estimate, double error_estimate)
      : std::runtime_error(what), estimate_(estimate), error_estimate_(error_estimate) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

/// A goal deviation exceeds the veto threshold.
class VetoViolation : public std::runtime_error {
 public:
  VetoViolation(const std::string& what, double deviation)
      : std::runtime_error(what), deviation_(deviation) {}

  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

/// Malformed configuration; names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace riskgp
