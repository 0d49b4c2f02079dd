#include "floc/multispecies.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "floc/error.hpp"

namespace floc {

namespace {

std::string at(const char* field, std::size_t i) { return std::string(field) + "[" + std::to_string(i) + "]"; }

}  // namespace

MultiSpeciesModel::MultiSpeciesModel(ChemostatParams params, std::vector<GrowthLaw> growth_u,
                                     std::vector<GrowthLaw> growth_v, std::vector<std::vector<double>> A,
                                     std::vector<double> b)
    : params_(std::move(params)),
      growth_u_(std::move(growth_u)),
      growth_v_(std::move(growth_v)),
      A_(std::move(A)),
      b_(std::move(b)) {
  validate(params_);
  if (!params_.equal_removal())
    throw ConfigError(params_.D_u != params_.D ? "D_u" : "D_v",
                      "the multi-species model requires equal removal rates D = D_u = D_v");
  const std::size_t n = b_.size();
  if (n == 0) throw ConfigError("species", "at least one species is required");
  if (growth_u_.size() != n || growth_v_.size() != n)
    throw ConfigError("species", "growth laws must be given for each of the " + std::to_string(n) + " species");
  if (A_.size() != n) throw ConfigError("A", "must have one row per species");
  for (std::size_t i = 0; i < n; ++i) {
    if (A_[i].size() != n) throw ConfigError(at("A", i), "must have one entry per species");
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(A_[i][j] >= 0.0) || !std::isfinite(A_[i][j]))
        throw ConfigError(at("A", i) + "[" + std::to_string(j) + "]", "must be nonnegative and finite");
      any = any || A_[i][j] > 0.0;
    }
    if (!any) throw ConfigError(at("A", i), "row must not be identically zero");
    if (!(b_[i] > 0.0) || !std::isfinite(b_[i])) throw ConfigError(at("b", i), "must be positive and finite");
    const std::string sp = at("species", i);
    growth_u_[i].validate(params_.S_in, sp + ".growth_u");
    growth_v_[i].validate(params_.S_in, sp + ".growth_v");
    for (double s : log_grid(1e-6, 10.0 * params_.S_in, 200))
      if (!(growth_u_[i](s) > growth_v_[i](s)))
        throw ConfigError(sp + ".growth_v", "attached growth must stay below planktonic growth for s > 0");
  }
}

double MultiSpeciesModel::alpha(std::size_t i, std::span<const double> x) const {
  if (!attachment_) return 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) acc += A_[i][j] * x[j];
  return acc;
}

MultiSpeciesModel MultiSpeciesModel::planktonic_only() const {
  MultiSpeciesModel m = *this;
  m.attachment_ = false;
  return m;
}

std::vector<double> q_bar(std::span<const double> x, const MultiSpeciesModel& model) {
  if (x.size() != model.size()) throw ConfigError("x", "length must equal the species count");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] >= 0.0)) throw ConfigError(at("x", i), "must be nonnegative");
  std::vector<double> q(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) q[i] = 1.0 / (1.0 + model.alpha(i, x) / model.b()[i]);
  return q;
}

namespace detail {

void multispecies_rhs(const MultiSpeciesModel& m, std::span<const double> y, std::span<double> dy) {
  const auto& P = m.params();
  const double s = y[0];
  const auto x = y.subspan(1);
  double uptake = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double q = 1.0 / (1.0 + m.alpha(i, x) / m.b()[i]);
    const double growth = q * m.growth_u(i)(s) + (1.0 - q) * m.growth_v(i)(s);
    uptake += growth * x[i];
    dy[i + 1] = (growth - P.D) * x[i];
  }
  dy[0] = P.D * (P.S_in - s) - uptake;
}

}  // namespace detail

std::vector<double> multispecies_reduced_rhs(std::span<const double> state, const MultiSpeciesModel& model) {
  if (state.size() != model.size() + 1) throw ConfigError("state", "expected (s, x_1, ..., x_n)");
  for (std::size_t i = 0; i < state.size(); ++i)
    if (!(state[i] >= 0.0)) throw ConfigError(at("state", i), "must be nonnegative");
  std::vector<double> dy(state.size());
  detail::multispecies_rhs(model, state, dy);
  return dy;
}

std::vector<double> fast_q_rhs(std::span<const double> q, std::span<const double> x, const MultiSpeciesModel& model) {
  if (q.size() != model.size() || x.size() != model.size())
    throw ConfigError("q", "q and x must have one entry per species");
  std::vector<double> dq(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(q[i] >= 0.0 && q[i] <= 1.0)) throw ConfigError(at("q", i), "must lie in [0, 1]");
    dq[i] = -model.alpha(i, x) * q[i] + model.b()[i] * (1.0 - q[i]);
  }
  return dq;
}

VectorField multispecies_field(const MultiSpeciesModel& model) {
  return [&model](double, std::span<const double> y, std::span<double> dy) { detail::multispecies_rhs(model, y, dy); };
}

Trajectory simulate_multispecies(const MultiSpeciesModel& model, std::span<const double> y0, double t_end,
                                 std::size_t points) {
  if (y0.size() != model.size() + 1) throw ConfigError("y0", "expected (s, x_1, ..., x_n)");
  if (!std::all_of(y0.begin(), y0.end(), [](double v) { return v >= 0.0; }))
    throw ConfigError("y0", "initial state must be nonnegative");
  IntegratorConfig cfg;
  cfg.enforce_nonnegative = true;
  Trajectory traj;
  if (points == 0) {
    traj = integrate(multispecies_field(model), y0, 0.0, t_end, cfg);
  } else {
    const auto grid = uniform_grid(0.0, t_end, points);
    traj = integrate(multispecies_field(model), y0, 0.0, t_end, cfg, std::span<const double>(grid));
  }
  traj.model_tag = model.attachment_enabled() ? "multispecies_reduced" : "multispecies_planktonic";
  traj.state_names = {"s"};
  for (std::size_t i = 0; i < model.size(); ++i) traj.state_names.push_back("x" + std::to_string(i + 1));
  return traj;
}

}  // namespace floc
