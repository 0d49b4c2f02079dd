#include "floc/growth.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "floc/error.hpp"

namespace floc {

namespace {

double fd_step(double s) { return std::max(1e-6, 1e-6 * std::abs(s)); }

}  // namespace

GrowthLaw::GrowthLaw(Monod m) : is_monod_(true), monod_(m), label_("monod") {}

GrowthLaw::GrowthLaw(Fn mu, Fn dmu, std::string label)
    : mu_(std::move(mu)), dmu_(std::move(dmu)), label_(std::move(label)) {}

GrowthLaw GrowthLaw::custom(Fn mu, Fn dmu, std::string label) {
  if (!mu) throw ConfigError(label, "growth function is empty");
  return GrowthLaw(std::move(mu), std::move(dmu), std::move(label));
}

double GrowthLaw::operator()(double s) const {
  if (is_monod_) return monod_.mu_max * s / (monod_.K + s);
  return mu_(s);
}

double GrowthLaw::derivative(double s) const {
  if (is_monod_) {
    const double den = monod_.K + s;
    return monod_.mu_max * monod_.K / (den * den);
  }
  if (dmu_) return dmu_(s);
  const double h = fd_step(s);
  return (mu_(s + h) - mu_(s - h)) / (2.0 * h);
}

double GrowthLaw::supremum() const {
  return is_monod_ ? monod_.mu_max : std::numeric_limits<double>::infinity();
}

const Monod& GrowthLaw::monod() const {
  if (!is_monod_) throw DomainError("growth law '" + label_ + "' is not Monod");
  return monod_;
}

void GrowthLaw::validate(double s_in, const std::string& field) const {
  if (is_monod_) {
    if (!(monod_.mu_max > 0.0) || !std::isfinite(monod_.mu_max))
      throw ConfigError(field + ".monod.mu_max", "must be positive and finite");
    if (!(monod_.K > 0.0) || !std::isfinite(monod_.K))
      throw ConfigError(field + ".monod.K", "must be positive and finite");
    return;
  }
  if ((*this)(0.0) != 0.0) throw ConfigError(field, "mu(0) must be exactly 0");
  const auto grid = log_grid(1e-6, 10.0 * s_in, 200);
  double prev = 0.0;
  for (double s : grid) {
    const double m = (*this)(s);
    if (!std::isfinite(m)) throw ConfigError(field, "mu(" + std::to_string(s) + ") is not finite");
    if (!(m > prev) || !(derivative(s) > 0.0))
      throw ConfigError(field, "mu must be strictly increasing (fails near s=" + std::to_string(s) + ")");
    prev = m;
  }
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  const double l0 = std::log(lo);
  const double l1 = std::log(hi);
  for (int i = 0; i < n; ++i) g[i] = std::exp(l0 + (l1 - l0) * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace floc
