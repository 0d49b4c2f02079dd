#include "floc/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace floc {

namespace {

// Dormand & Prince (1980) RK5(4)7M tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;
// difference between the 5th and 4th order weights
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// continuous extension (Hairer, Norsett & Wanner, dopri5)
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct Workspace {
  explicit Workspace(std::size_t n)
      : k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y1(n), r1(n), r2(n), r3(n), r4(n), r5(n) {}
  std::vector<double> k1, k2, k3, k4, k5, k6, k7, tmp, y1;
  std::vector<double> r1, r2, r3, r4, r5;  // dense output coefficients
};

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Stages 2..7 given k1 = f(t, y); fills y1 (5th order) and k7 = f(t + h, y1).
void dp_stages(const VectorField& f, double t, double h, std::span<const double> y, Workspace& w) {
  const std::size_t n = y.size();
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * a21 * w.k1[i];
  f(t + c2 * h, w.tmp, w.k2);
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * (a31 * w.k1[i] + a32 * w.k2[i]);
  f(t + c3 * h, w.tmp, w.k3);
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * (a41 * w.k1[i] + a42 * w.k2[i] + a43 * w.k3[i]);
  f(t + c4 * h, w.tmp, w.k4);
  for (std::size_t i = 0; i < n; ++i)
    w.tmp[i] = y[i] + h * (a51 * w.k1[i] + a52 * w.k2[i] + a53 * w.k3[i] + a54 * w.k4[i]);
  f(t + c5 * h, w.tmp, w.k5);
  for (std::size_t i = 0; i < n; ++i)
    w.tmp[i] = y[i] + h * (a61 * w.k1[i] + a62 * w.k2[i] + a63 * w.k3[i] + a64 * w.k4[i] + a65 * w.k5[i]);
  f(t + h, w.tmp, w.k6);
  for (std::size_t i = 0; i < n; ++i)
    w.y1[i] = y[i] + h * (a71 * w.k1[i] + a73 * w.k3[i] + a74 * w.k4[i] + a75 * w.k5[i] + a76 * w.k6[i]);
  f(t + h, w.y1, w.k7);
}

double error_norm(double h, std::span<const double> y, const Workspace& w, const IntegratorConfig& cfg) {
  const std::size_t n = y.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double err =
        h * (e1 * w.k1[i] + e3 * w.k3[i] + e4 * w.k4[i] + e5 * w.k5[i] + e6 * w.k6[i] + e7 * w.k7[i]);
    const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(w.y1[i]));
    acc += (err / sc) * (err / sc);
  }
  return std::sqrt(acc / static_cast<double>(n));
}

double initial_step(const VectorField& f, double t0, std::span<const double> y0, const std::vector<double>& f0,
                    double h_max, const IntegratorConfig& cfg) {
  const std::size_t n = y0.size();
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y0[i]);
    d0 += (y0[i] / sc) * (y0[i] / sc);
    d1 += (f0[i] / sc) * (f0[i] / sc);
  }
  d0 = std::sqrt(d0 / n);
  d1 = std::sqrt(d1 / n);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, h_max);

  std::vector<double> y1(n), f1(n);
  for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + h0 * f0[i];
  f(t0 + h0, y1, f1);
  double d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y0[i]);
    d2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
  }
  d2 = std::sqrt(d2 / n) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
  return std::min({100.0 * h0, h1, h_max});
}

std::string at_time(const char* what, double t) {
  std::ostringstream os;
  os.precision(17);
  os << what << " at t=" << t;
  return os.str();
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0)) throw ConfigError("rel_tol", "must be positive");
  if (!(abs_tol > 0.0)) throw ConfigError("abs_tol", "must be positive");
  if (max_step && !(*max_step > 0.0)) throw ConfigError("max_step", "must be positive");
  if (initial_step && !(*initial_step > 0.0)) throw ConfigError("initial_step", "must be positive");
  if (max_steps < 1) throw ConfigError("max_steps", "must be at least 1");
  if (!(nonnegative_tol >= 0.0)) throw ConfigError("nonnegative_tol", "must be nonnegative");
}

std::vector<double> Trajectory::component(std::size_t k) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = data[i * dimension + k];
  return out;
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
  if (n < 2) throw ConfigError("points", "an output grid needs at least two points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = t1;
  return g;
}

Trajectory integrate(const VectorField& rhs, std::span<const double> y0, double t0, double t1,
                     const IntegratorConfig& config, std::optional<std::span<const double>> output_grid) {
  config.validate();
  if (!(t1 > t0)) throw ConfigError("t_span", "t1 must exceed t0");
  if (y0.empty()) throw ConfigError("y0", "state vector is empty");
  if (!std::all_of(y0.begin(), y0.end(), [](double v) { return std::isfinite(v); }))
    throw ConfigError("y0", "initial state must be finite");
  if (output_grid) {
    const auto& g = *output_grid;
    if (g.empty()) throw ConfigError("output_grid", "grid is empty");
    if (g.front() < t0 || g.back() > t1) throw ConfigError("output_grid", "grid must lie inside [t0, t1]");
    if (!std::is_sorted(g.begin(), g.end())) throw ConfigError("output_grid", "grid must be nondecreasing");
  }

  const std::size_t n = y0.size();
  const double h_max = config.max_step.value_or((t1 - t0) / 100.0);

  Trajectory traj;
  traj.dimension = n;

  std::vector<double> y(y0.begin(), y0.end());
  Workspace w(n);
  rhs(t0, y, w.k1);
  if (!all_finite(w.k1)) throw IntegrationError(IntegrationError::Kind::NonFinite, t0, at_time("non-finite right-hand side", t0));

  std::size_t next_out = 0;
  auto emit = [&](double t, std::span<const double> state) {
    traj.times.push_back(t);
    traj.data.insert(traj.data.end(), state.begin(), state.end());
  };
  auto clamp_output = [&](std::vector<double>& state) {
    if (!config.enforce_nonnegative) return;
    for (double& v : state)
      if (v < 0.0 && v >= -config.nonnegative_tol) v = 0.0;
  };

  if (output_grid) {
    while (next_out < output_grid->size() && (*output_grid)[next_out] == t0) {
      emit(t0, y);
      ++next_out;
    }
  } else {
    emit(t0, y);
  }

  double t = t0;
  double h = config.initial_step ? std::min(*config.initial_step, h_max) : initial_step(rhs, t0, y, w.k1, h_max, config);
  bool last_rejected = false;
  std::vector<double> dense(n);

  while (t < t1) {
    if (traj.n_accepted + traj.n_rejected >= config.max_steps)
      throw IntegrationError(IntegrationError::Kind::StepLimit, t, at_time("step limit exhausted", t));
    if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
      throw IntegrationError(IntegrationError::Kind::StepUnderflow, t, at_time("step size underflow", t));

    bool final_step = false;
    if (t + h >= t1 || t + 1.01 * h >= t1) {
      h = t1 - t;
      final_step = true;
    }

    dp_stages(rhs, t, h, y, w);
    if (!all_finite(w.y1) || !all_finite(w.k7) || !all_finite(w.k6) || !all_finite(w.k5)) {
      ++traj.n_rejected;
      h *= 0.25;
      last_rejected = true;
      continue;
    }

    const double err = error_norm(h, y, w, config);
    if (!(err <= 1.0)) {
      ++traj.n_rejected;
      const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= fac;
      last_rejected = true;
      continue;
    }

    // accepted
    const double t_new = final_step ? t1 : t + h;
    for (std::size_t i = 0; i < n; ++i) {
      const double dy = w.y1[i] - y[i];
      const double bspl = h * w.k1[i] - dy;
      w.r1[i] = y[i];
      w.r2[i] = dy;
      w.r3[i] = bspl;
      w.r4[i] = dy - h * w.k7[i] - bspl;
      w.r5[i] = h * (d1 * w.k1[i] + d3 * w.k3[i] + d4 * w.k4[i] + d5 * w.k5[i] + d6 * w.k6[i] + d7 * w.k7[i]);
    }

    bool projected = false;
    if (config.enforce_nonnegative) {
      for (std::size_t i = 0; i < n; ++i) {
        if (w.y1[i] >= 0.0) continue;
        if (w.y1[i] < -config.nonnegative_tol) {
          std::ostringstream os;
          os.precision(17);
          os << "component " << i << " reached " << w.y1[i] << " below -" << config.nonnegative_tol;
          throw IntegrationError(IntegrationError::Kind::Negativity, t_new, at_time(os.str().c_str(), t_new));
        }
        w.y1[i] = 0.0;
        projected = true;
      }
    }

    if (output_grid) {
      const auto& g = *output_grid;
      while (next_out < g.size() && g[next_out] <= t_new) {
        const double tg = g[next_out];
        if (tg == t_new) {
          emit(tg, w.y1);
        } else {
          const double theta = (tg - t) / h;
          const double theta1 = 1.0 - theta;
          for (std::size_t i = 0; i < n; ++i)
            dense[i] = w.r1[i] + theta * (w.r2[i] + theta1 * (w.r3[i] + theta * (w.r4[i] + theta1 * w.r5[i])));
          clamp_output(dense);
          emit(tg, dense);
        }
        ++next_out;
      }
    } else {
      emit(t_new, w.y1);
    }

    ++traj.n_accepted;
    t = t_new;
    y.swap(w.y1);
    if (projected) {
      rhs(t, y, w.k1);
    } else {
      w.k1.swap(w.k7);
    }
    if (!all_finite(w.k1)) throw IntegrationError(IntegrationError::Kind::NonFinite, t, at_time("non-finite right-hand side", t));

    double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    fac = std::clamp(fac, 0.2, 5.0);
    if (last_rejected) fac = std::min(fac, 1.0);
    last_rejected = false;
    h = std::min(h * fac, h_max);
  }
  return traj;
}

std::vector<double> integrate_fixed(const VectorField& rhs, std::span<const double> y0, double t0, double t1,
                                    std::size_t n_steps) {
  if (n_steps < 1) throw ConfigError("n_steps", "must be at least 1");
  const std::size_t n = y0.size();
  const double h = (t1 - t0) / static_cast<double>(n_steps);
  std::vector<double> y(y0.begin(), y0.end());
  Workspace w(n);
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    rhs(t, y, w.k1);
    dp_stages(rhs, t, h, y, w);
    y.swap(w.y1);
  }
  return y;
}

}  // namespace floc
