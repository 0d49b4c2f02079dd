#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "floc/attachment.hpp"
#include "floc/growth.hpp"
#include "floc/integrator.hpp"
#include "floc/model.hpp"

namespace floc {

/// Fast exchange term g(x, p) = -alpha(px, (1-p)x) p + beta((1-p)x)(1-p).
double g_fast(double x, double p, const AttachmentLaws& laws);
double g_fast_dx(double x, double p, const AttachmentLaws& laws);
double g_fast_dp(double x, double p, const AttachmentLaws& laws);

/// Root of p -> g(x, p) on (0, 1), always by bisection. p = 1 at x = 0.
double solve_pbar_bisection(double x, const AttachmentLaws& laws);

/// Same root; uses 1 / (1 + (a/b) x) for linear-total / constant laws.
double solve_pbar(double x, const AttachmentLaws& laws);

/// Equilibrium planktonic fraction pbar(x) of the fast exchange dynamics.
class SlowManifold {
 public:
  enum class Provenance { ClosedForm, Bisection };

  explicit SlowManifold(AttachmentLaws laws);

  double value(double x) const;
  /// Closed form when available, implicit-function formula otherwise.
  double derivative(double x) const;
  /// -g_x / g_p evaluated on the manifold.
  double implicit_derivative(double x) const;

  Provenance provenance() const noexcept { return provenance_; }
  const AttachmentLaws& laws() const noexcept { return laws_; }

 private:
  AttachmentLaws laws_;
  Provenance provenance_;
  double ratio_ = 0.0;
};

/// Slow (s, x) dynamics with density-dependent growth mu(s, x) = mu_bar(s, pbar(x))
/// and removal d(x) = pbar(x) D_u + (1 - pbar(x)) D_v.
class ReducedModel {
 public:
  explicit ReducedModel(const Model& model);

  const ChemostatParams& params() const noexcept { return params_; }
  const GrowthLaw& growth_u() const noexcept { return growth_u_; }
  const GrowthLaw& growth_v() const noexcept { return growth_v_; }
  const SlowManifold& manifold() const noexcept { return manifold_; }

  double removal(double x) const;
  double removal_dx(double x) const;
  double mu(double s, double x) const;
  double mu_ds(double s, double x) const;
  double mu_dx(double s, double x) const;

 private:
  ChemostatParams params_;
  GrowthLaw growth_u_;
  GrowthLaw growth_v_;
  SlowManifold manifold_;
};

double mu_density(double s, double x, const ReducedModel& model);

ReducedState reduced_rhs(const ReducedState& state, const ReducedModel& model);

namespace detail {
void reduced_rhs(const ReducedModel& m, std::span<const double> y, std::span<double> dy);
}  // namespace detail

/// Integrator settings for the single-species models: the library defaults,
/// the nonnegativity guard on, and max_step <= eps / 2 whenever eps < 0.1.
IntegratorConfig model_integrator_config(const ChemostatParams& params, double t_span);

VectorField full_field(const Model& model);
VectorField xp_field(const Model& model);
VectorField reduced_field(const ReducedModel& model);

/// `points` == 0 records every accepted step; otherwise a uniform grid.
Trajectory simulate_full(const Model& model, const FullState& y0, double t_end, std::size_t points = 500);
Trajectory simulate_xp(const Model& model, const XPState& y0, double t_end, std::size_t points = 500);
Trajectory simulate_reduced(const ReducedModel& model, const ReducedState& y0, double t_end,
                            std::size_t points = 500);

struct CompareOptions {
  std::size_t points = 500;
  /// Grid points with t < boundary_layer_factor * eps are excluded.
  double boundary_layer_factor = 5.0;
  unsigned jobs = 1;
};

struct EpsilonDeviation {
  double epsilon = 0.0;
  double window_start = 0.0;
  double sup_dev_s = 0.0;
  double sup_dev_x = 0.0;
  double terminal_dev_s = 0.0;
  double terminal_dev_x = 0.0;
  Trajectory full;  // columns s, u, v
};

struct ComparisonReport {
  FullState initial;
  ReducedState reduced_initial;
  double t_end = 0.0;
  double boundary_layer_factor = 5.0;
  std::vector<double> grid;
  std::vector<EpsilonDeviation> runs;  // eps_list order
  Trajectory reduced;                  // columns s, x
};

/// Integrates the full model once per epsilon and the reduced model once,
/// from (s0, u0 + v0), and measures sup-norm gaps in s and x on a common grid.
ComparisonReport compare_slow_fast(const Model& model, std::span<const double> eps_list, const FullState& y0,
                                   double t_end, const CompareOptions& options = {});

nlohmann::json to_json(const ComparisonReport& report);

}  // namespace floc
