#pragma once

#include <functional>
#include <string>
#include <vector>

namespace floc {

struct Monod {
  double mu_max = 1.0;
  double K = 1.0;
};

/// Specific growth rate mu(s) of one biomass compartment.
///
/// Either a Monod law, evaluated and differentiated in closed form, or a
/// user-supplied callable. Custom laws without an explicit derivative fall
/// back to central differences with step max(1e-6, 1e-6 |s|). Monotonicity
/// of custom laws can only be checked numerically, see validate().
class GrowthLaw {
 public:
  using Fn = std::function<double(double)>;

  GrowthLaw() : GrowthLaw(Monod{}) {}
  GrowthLaw(Monod m);  // NOLINT(google-explicit-constructor)
  static GrowthLaw custom(Fn mu, Fn dmu = {}, std::string label = "custom");

  double operator()(double s) const;
  double derivative(double s) const;

  /// Least upper bound of mu on [0, inf) when known in closed form,
  /// otherwise +inf (callers probe numerically).
  double supremum() const;

  bool is_monod() const noexcept { return is_monod_; }
  const Monod& monod() const;
  const std::string& label() const noexcept { return label_; }

  /// Checks mu(0) == 0 and strict increase on a log-spaced grid over
  /// [1e-6, 10 * s_in]. Throws ConfigError(field, ...) on violation.
  void validate(double s_in, const std::string& field) const;

 private:
  GrowthLaw(Fn mu, Fn dmu, std::string label);

  bool is_monod_ = false;
  Monod monod_{};
  Fn mu_;
  Fn dmu_;
  std::string label_;
};

/// Log-spaced points over [lo, hi], n >= 2.
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace floc
