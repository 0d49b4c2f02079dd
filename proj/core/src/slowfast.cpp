#include "floc/slowfast.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <utility>

#include "floc/csv.hpp"
#include "floc/error.hpp"
#include "floc/roots.hpp"

namespace floc {

double g_fast(double x, double p, const AttachmentLaws& laws) {
  const double u = p * x;
  const double v = (1.0 - p) * x;
  return -laws.alpha(u, v) * p + laws.beta(v) * (1.0 - p);
}

double g_fast_dx(double x, double p, const AttachmentLaws& laws) {
  const double u = p * x;
  const double v = (1.0 - p) * x;
  const double q = 1.0 - p;
  return -((laws.alpha_du(u, v) * p + laws.alpha_dv(u, v) * q) * p - laws.beta_dv(v) * q * q);
}

double g_fast_dp(double x, double p, const AttachmentLaws& laws) {
  const double u = p * x;
  const double v = (1.0 - p) * x;
  // d/dv (beta(v) v) enters without a 1/x factor
  return -((laws.alpha_du(u, v) - laws.alpha_dv(u, v)) * u + laws.alpha(u, v) + laws.beta_dv(v) * v +
           laws.beta(v));
}

double solve_pbar_bisection(double x, const AttachmentLaws& laws) {
  if (!(x >= 0.0)) throw DomainError("pbar requires x >= 0");
  if (x == 0.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  double g_lo = g_fast(x, lo, laws), g_hi = g_fast(x, hi, laws);
  // g(x, .) is strictly decreasing with g(x, 0) > 0 > g(x, 1); halve until
  // the bracket is two adjacent doubles (width far below 1e-14)
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g_fast(x, mid, laws);
    if (gm == 0.0) return mid;
    if (gm > 0.0) {
      lo = mid;
      g_lo = gm;
    } else {
      hi = mid;
      g_hi = gm;
    }
  }
  return std::abs(g_lo) <= std::abs(g_hi) ? lo : hi;
}

double solve_pbar(double x, const AttachmentLaws& laws) {
  if (!(x >= 0.0)) throw DomainError("pbar requires x >= 0");
  if (laws.is_simple()) return 1.0 / (1.0 + laws.ratio() * x);
  return solve_pbar_bisection(x, laws);
}

SlowManifold::SlowManifold(AttachmentLaws laws)
    : laws_(std::move(laws)), provenance_(laws_.is_simple() ? Provenance::ClosedForm : Provenance::Bisection) {
  if (laws_.is_simple()) ratio_ = laws_.ratio();
}

double SlowManifold::value(double x) const {
  if (provenance_ == Provenance::ClosedForm) return 1.0 / (1.0 + ratio_ * x);
  // the reduced vector field is evaluated slightly outside the orthant by
  // finite-difference stencils; continue the closed form there
  if (x < 0.0) return 1.0;
  return solve_pbar_bisection(x, laws_);
}

double SlowManifold::derivative(double x) const {
  if (provenance_ == Provenance::ClosedForm) {
    const double den = 1.0 + ratio_ * x;
    return -ratio_ / (den * den);
  }
  return implicit_derivative(x);
}

double SlowManifold::implicit_derivative(double x) const {
  if (x <= 0.0) {
    // limit x -> 0+: g_x -> -alpha_u(0,0), g_p -> -(alpha(0,0) + beta(0))
    return -laws_.alpha_du(0.0, 0.0) / (laws_.alpha(0.0, 0.0) + laws_.beta(0.0));
  }
  const double p = value(x);
  return -g_fast_dx(x, p, laws_) / g_fast_dp(x, p, laws_);
}

ReducedModel::ReducedModel(const Model& model)
    : params_(model.params()), growth_u_(model.growth_u()), growth_v_(model.growth_v()), manifold_(model.laws()) {}

double ReducedModel::removal(double x) const {
  const double p = manifold_.value(x);
  return p * params_.D_u + (1.0 - p) * params_.D_v;
}

double ReducedModel::removal_dx(double x) const { return manifold_.derivative(x) * (params_.D_u - params_.D_v); }

double ReducedModel::mu(double s, double x) const {
  const double p = manifold_.value(x);
  return p * growth_u_(s) + (1.0 - p) * growth_v_(s);
}

double ReducedModel::mu_ds(double s, double x) const {
  const double p = manifold_.value(x);
  return p * growth_u_.derivative(s) + (1.0 - p) * growth_v_.derivative(s);
}

double ReducedModel::mu_dx(double s, double x) const {
  return (growth_u_(s) - growth_v_(s)) * manifold_.derivative(x);
}

double mu_density(double s, double x, const ReducedModel& model) {
  if (!(s >= 0.0) || !(x >= 0.0)) throw ConfigError("state", "mu(s, x) requires s, x >= 0");
  return model.mu(s, x);
}

namespace detail {

void reduced_rhs(const ReducedModel& m, std::span<const double> y, std::span<double> dy) {
  const auto& P = m.params();
  const double s = y[0], x = y[1];
  const double growth = m.mu(s, x);
  dy[0] = P.D * (P.S_in - s) - growth * x;
  dy[1] = (growth - m.removal(x)) * x;
}

}  // namespace detail

ReducedState reduced_rhs(const ReducedState& state, const ReducedModel& model) {
  if (!(state.s >= 0.0)) throw ConfigError("state.s", "must be nonnegative");
  if (!(state.x >= 0.0)) throw ConfigError("state.x", "must be nonnegative");
  const auto y = state.to_array();
  std::array<double, 2> dy{};
  detail::reduced_rhs(model, y, dy);
  return ReducedState::from(dy);
}

IntegratorConfig model_integrator_config(const ChemostatParams& params, double t_span) {
  IntegratorConfig cfg;
  cfg.enforce_nonnegative = true;
  double h_max = t_span / 100.0;
  if (params.epsilon && *params.epsilon < 0.1) h_max = std::min(h_max, *params.epsilon / 2.0);
  cfg.max_step = h_max;
  return cfg;
}

VectorField full_field(const Model& model) {
  return [&model](double, std::span<const double> y, std::span<double> dy) { detail::full_rhs(model, y, dy); };
}

VectorField xp_field(const Model& model) {
  return [&model](double, std::span<const double> y, std::span<double> dy) { detail::xp_rhs(model, y, dy); };
}

VectorField reduced_field(const ReducedModel& model) {
  return [&model](double, std::span<const double> y, std::span<double> dy) { detail::reduced_rhs(model, y, dy); };
}

namespace {

Trajectory run(const VectorField& f, std::span<const double> y0, double t_end, std::size_t points,
               const IntegratorConfig& cfg) {
  if (points == 0) return integrate(f, y0, 0.0, t_end, cfg);
  const auto grid = uniform_grid(0.0, t_end, points);
  return integrate(f, y0, 0.0, t_end, cfg, std::span<const double>(grid));
}

}  // namespace

Trajectory simulate_full(const Model& model, const FullState& y0, double t_end, std::size_t points) {
  if (!(y0.s >= 0.0 && y0.u >= 0.0 && y0.v >= 0.0)) throw ConfigError("y0", "initial state must be nonnegative");
  const auto y = y0.to_array();
  auto traj = run(full_field(model), y, t_end, points, model_integrator_config(model.params(), t_end));
  traj.model_tag = "full";
  traj.state_names = {"s", "u", "v"};
  return traj;
}

Trajectory simulate_xp(const Model& model, const XPState& y0, double t_end, std::size_t points) {
  if (!(y0.s >= 0.0 && y0.x > 0.0 && y0.p >= 0.0 && y0.p <= 1.0))
    throw ConfigError("y0", "xp state needs s >= 0, x > 0, 0 <= p <= 1");
  const auto y = y0.to_array();
  auto traj = run(xp_field(model), y, t_end, points, model_integrator_config(model.params(), t_end));
  traj.model_tag = "xp";
  traj.state_names = {"s", "x", "p"};
  return traj;
}

Trajectory simulate_reduced(const ReducedModel& model, const ReducedState& y0, double t_end, std::size_t points) {
  if (!(y0.s >= 0.0 && y0.x >= 0.0)) throw ConfigError("y0", "initial state must be nonnegative");
  const auto y = y0.to_array();
  auto cfg = model_integrator_config(model.params(), t_end);
  cfg.max_step = t_end / 100.0;  // no fast variable left
  auto traj = run(reduced_field(model), y, t_end, points, cfg);
  traj.model_tag = "reduced";
  traj.state_names = {"s", "x"};
  return traj;
}

ComparisonReport compare_slow_fast(const Model& model, std::span<const double> eps_list, const FullState& y0,
                                   double t_end, const CompareOptions& options) {
  if (eps_list.empty()) throw ConfigError("eps_list", "at least one epsilon is required");
  if (!(y0.u + y0.v > 0.0)) throw ConfigError("y0", "comparison needs u0 + v0 > 0");
  if (!(t_end > 0.0)) throw ConfigError("t_end", "must be positive");
  for (double e : eps_list)
    if (!(e > 0.0)) throw ConfigError("eps_list", "epsilon values must be positive");

  ComparisonReport report;
  report.initial = y0;
  report.reduced_initial = {y0.s, y0.u + y0.v};
  report.t_end = t_end;
  report.boundary_layer_factor = options.boundary_layer_factor;
  report.grid = uniform_grid(0.0, t_end, options.points);

  const ReducedModel reduced(model);
  report.reduced = simulate_reduced(reduced, report.reduced_initial, t_end, options.points);

  auto one = [&](double eps) {
    ChemostatParams p = model.params();
    p.epsilon = eps;
    const Model m = model.with_params(p, {.allow_removal_above_dilution = true});
    EpsilonDeviation dev;
    dev.epsilon = eps;
    dev.window_start = options.boundary_layer_factor * eps;
    try {
      dev.full = simulate_full(m, y0, t_end, options.points);
    } catch (const IntegrationError& e) {
      throw IntegrationError(e.kind(), e.t_reached(), "eps=" + format_short(eps) + ": " + e.what());
    }
    for (std::size_t i = 0; i < report.grid.size(); ++i) {
      if (report.grid[i] < dev.window_start) continue;
      const auto f = dev.full.state(i);
      const auto r = report.reduced.state(i);
      dev.sup_dev_s = std::max(dev.sup_dev_s, std::abs(f[0] - r[0]));
      dev.sup_dev_x = std::max(dev.sup_dev_x, std::abs(f[1] + f[2] - r[1]));
    }
    const auto f = dev.full.back();
    const auto r = report.reduced.back();
    dev.terminal_dev_s = std::abs(f[0] - r[0]);
    dev.terminal_dev_x = std::abs(f[1] + f[2] - r[1]);
    return dev;
  };

  if (options.jobs > 1) {
    std::vector<std::future<EpsilonDeviation>> pending;
    for (double e : eps_list) pending.push_back(std::async(std::launch::async, one, e));
    for (auto& fut : pending) report.runs.push_back(fut.get());
  } else {
    for (double e : eps_list) report.runs.push_back(one(e));
  }
  return report;
}

nlohmann::json to_json(const ComparisonReport& report) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : report.runs) {
    runs.push_back({{"epsilon", r.epsilon},
                    {"window_start", r.window_start},
                    {"sup_dev_s", r.sup_dev_s},
                    {"sup_dev_x", r.sup_dev_x},
                    {"terminal_dev_s", r.terminal_dev_s},
                    {"terminal_dev_x", r.terminal_dev_x},
                    {"full_terminal", {{"s", r.full.back()[0]}, {"u", r.full.back()[1]}, {"v", r.full.back()[2]}}},
                    {"steps_accepted", r.full.n_accepted},
                    {"steps_rejected", r.full.n_rejected}});
  }
  return {{"initial", {{"s", report.initial.s}, {"u", report.initial.u}, {"v", report.initial.v}}},
          {"reduced_initial", {{"s", report.reduced_initial.s}, {"x", report.reduced_initial.x}}},
          {"t_end", report.t_end},
          {"grid_points", report.grid.size()},
          {"boundary_layer_factor", report.boundary_layer_factor},
          {"comparison_window", "grid points with t >= boundary_layer_factor * epsilon"},
          {"reduced_terminal", {{"s", report.reduced.back()[0]}, {"x", report.reduced.back()[1]}}},
          {"runs", runs}};
}

}  // namespace floc
