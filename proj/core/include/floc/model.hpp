#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>

#include "floc/attachment.hpp"
#include "floc/growth.hpp"

namespace floc {

/// Operating conditions. D_u and D_v are the removal rates of planktonic and
/// attached biomass; epsilon, when set, divides the attachment/detachment
/// terms (fast exchange regime).
struct ChemostatParams {
  double D = 0.5;
  double S_in = 2.0;
  double D_u = 0.5;
  double D_v = 0.5;
  std::optional<double> epsilon;

  /// epsilon or 1 when absent
  double eps() const noexcept { return epsilon.value_or(1.0); }
  bool equal_removal() const noexcept { return D == D_u && D_u == D_v; }

  static ChemostatParams equal(double D, double S_in,
                               std::optional<double> epsilon = std::nullopt) {
    return {D, S_in, D, D, epsilon};
  }
};

struct ValidationOptions {
  /// Allows D_u > D for exploration runs; D_u >= D_v > 0 is always enforced.
  bool allow_removal_above_dilution = false;
};

void validate(const ChemostatParams& p, const ValidationOptions& opts = {});

struct FullState {
  double s = 0.0;
  double u = 0.0;
  double v = 0.0;

  double x() const noexcept { return u + v; }
  std::array<double, 3> to_array() const { return {s, u, v}; }
  static FullState from(std::span<const double> y) { return {y[0], y[1], y[2]}; }
};

struct XPState {
  double s = 0.0;
  double x = 0.0;
  double p = 1.0;

  std::array<double, 3> to_array() const { return {s, x, p}; }
  static XPState from(std::span<const double> y) { return {y[0], y[1], y[2]}; }
  static XPState from_full(const FullState& f);
  FullState to_full() const { return {s, p * x, (1.0 - p) * x}; }
};

struct ReducedState {
  double s = 0.0;
  double x = 0.0;

  std::array<double, 2> to_array() const { return {s, x}; }
  static ReducedState from(std::span<const double> y) { return {y[0], y[1]}; }
};

/// A validated single-species model. Construction checks every parameter
/// and law assumption; the object is immutable afterwards.
class Model {
 public:
  Model(ChemostatParams params, GrowthLaw growth_u, GrowthLaw growth_v,
        AttachmentLaws laws, const ValidationOptions& opts = {});

  const ChemostatParams& params() const noexcept { return params_; }
  const GrowthLaw& growth_u() const noexcept { return growth_u_; }
  const GrowthLaw& growth_v() const noexcept { return growth_v_; }
  const AttachmentLaws& laws() const noexcept { return laws_; }

  /// Copy with new parameters (re-validated).
  Model with_params(ChemostatParams p, const ValidationOptions& opts = {}) const;

 private:
  ChemostatParams params_;
  GrowthLaw growth_u_;
  GrowthLaw growth_v_;
  AttachmentLaws laws_;
};

/// p mu_u(s) + (1 - p) mu_v(s)
double mu_bar(double s, double p, const GrowthLaw& growth_u, const GrowthLaw& growth_v);

/// Time derivative of (s, u, v). Unit yields; exchange terms divided by
/// epsilon when present. Throws ConfigError on a negative component.
FullState full_rhs(const FullState& state, const Model& model);

/// Time derivative of (s, x, p) with x = u + v and p = u / x. Requires x > 0.
XPState xp_rhs(const XPState& state, const Model& model);

namespace detail {
// Unchecked kernels used by integrators; stage values may sit a rounding
// error outside the orthant.
void full_rhs(const Model& m, std::span<const double> y, std::span<double> dy);
void xp_rhs(const Model& m, std::span<const double> y, std::span<double> dy);
}  // namespace detail

}  // namespace floc
