#include "floc/model.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "floc/error.hpp"
#include "floc/slowfast.hpp"

namespace floc {

namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw ConfigError(field, "must be positive and finite (got " + std::to_string(value) + ")");
}

void require_nonnegative(double value, const char* field) {
  if (!(value >= 0.0) || !std::isfinite(value))
    throw ConfigError(field, "must be nonnegative and finite (got " + std::to_string(value) + ")");
}

}  // namespace

void validate(const ChemostatParams& p, const ValidationOptions& opts) {
  require_positive(p.S_in, "S_in");
  require_positive(p.D, "D");
  require_positive(p.D_u, "D_u");
  require_positive(p.D_v, "D_v");
  if (p.D_v > p.D_u)
    throw ConfigError("D_v", "attached removal rate must not exceed D_u (D_v=" + std::to_string(p.D_v) +
                                 ", D_u=" + std::to_string(p.D_u) + ")");
  if (p.D_u > p.D && !opts.allow_removal_above_dilution)
    throw ConfigError("D_u", "planktonic removal rate must not exceed D (D_u=" + std::to_string(p.D_u) +
                                 ", D=" + std::to_string(p.D) + ")");
  if (p.epsilon) require_positive(*p.epsilon, "epsilon");
}

XPState XPState::from_full(const FullState& f) {
  const double x = f.u + f.v;
  if (!(x > 0.0)) throw DomainError("p = u/x is undefined at x = 0");
  return {f.s, x, f.u / x};
}

Model::Model(ChemostatParams params, GrowthLaw growth_u, GrowthLaw growth_v, AttachmentLaws laws,
             const ValidationOptions& opts)
    : params_(std::move(params)),
      growth_u_(std::move(growth_u)),
      growth_v_(std::move(growth_v)),
      laws_(std::move(laws)) {
  validate(params_, opts);
  growth_u_.validate(params_.S_in, "growth_u");
  growth_v_.validate(params_.S_in, "growth_v");
  for (double s : log_grid(1e-6, 10.0 * params_.S_in, 200)) {
    if (!(growth_u_(s) > growth_v_(s)))
      throw ConfigError("growth_v", "attached growth must stay below planktonic growth for s > 0 (fails at s=" +
                                        std::to_string(s) + ")");
  }
  laws_.validate(10.0 * params_.S_in);
}

Model Model::with_params(ChemostatParams p, const ValidationOptions& opts) const {
  return Model(std::move(p), growth_u_, growth_v_, laws_, opts);
}

double mu_bar(double s, double p, const GrowthLaw& growth_u, const GrowthLaw& growth_v) {
  if (!(s >= 0.0)) throw ConfigError("s", "must be nonnegative");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p", "must lie in [0, 1]");
  return p * growth_u(s) + (1.0 - p) * growth_v(s);
}

namespace detail {

void full_rhs(const Model& m, std::span<const double> y, std::span<double> dy) {
  const auto& P = m.params();
  const double s = y[0], u = y[1], v = y[2];
  const double mu_u = m.growth_u()(s);
  const double mu_v = m.growth_v()(s);
  const auto& L = m.laws();
  const double exchange = (L.alpha(u, v) * u - L.beta(v) * v) / P.eps();
  dy[0] = P.D * (P.S_in - s) - mu_u * u - mu_v * v;
  dy[1] = (mu_u - P.D_u) * u - exchange;
  dy[2] = (mu_v - P.D_v) * v + exchange;
}

void xp_rhs(const Model& m, std::span<const double> y, std::span<double> dy) {
  const auto& P = m.params();
  const double s = y[0], x = y[1], p = y[2];
  const double mu_u = m.growth_u()(s);
  const double mu_v = m.growth_v()(s);
  const double mean_mu = p * mu_u + (1.0 - p) * mu_v;
  const double removal = p * P.D_u + (1.0 - p) * P.D_v;
  dy[0] = P.D * (P.S_in - s) - mean_mu * x;
  dy[1] = (mean_mu - removal) * x;
  dy[2] = p * (1.0 - p) * ((mu_u - mu_v) - (P.D_u - P.D_v)) + g_fast(x, p, m.laws()) / P.eps();
}

}  // namespace detail

FullState full_rhs(const FullState& state, const Model& model) {
  require_nonnegative(state.s, "state.s");
  require_nonnegative(state.u, "state.u");
  require_nonnegative(state.v, "state.v");
  const auto y = state.to_array();
  std::array<double, 3> dy{};
  detail::full_rhs(model, y, dy);
  return FullState::from(dy);
}

XPState xp_rhs(const XPState& state, const Model& model) {
  require_nonnegative(state.s, "state.s");
  if (!(state.x > 0.0)) throw DomainError("xp_rhs requires x > 0 (p is undefined at x = 0)");
  if (!(state.p >= 0.0 && state.p <= 1.0)) throw ConfigError("state.p", "must lie in [0, 1]");
  const auto y = state.to_array();
  std::array<double, 3> dy{};
  detail::xp_rhs(model, y, dy);
  return XPState::from(dy);
}

}  // namespace floc
