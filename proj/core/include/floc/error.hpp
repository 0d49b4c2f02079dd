#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace floc {

/// Invalid model or run configuration. `field()` names the offending entry
/// as a dotted path (e.g. "growth_u.monod.K") so front ends can point at it.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Argument outside the domain where a formula is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed to deliver its contract (bracket lost,
/// integrator gave up, inconsistent stability signs).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace floc
