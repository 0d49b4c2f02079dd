#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "floc/error.hpp"

namespace floc {

/// dy/dt = f(t, y), written into the output span.
using VectorField = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct IntegratorConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  /// Defaults to (t1 - t0) / 100.
  std::optional<double> max_step;
  std::size_t max_steps = 10'000'000;
  std::optional<double> initial_step;
  /// Project components in [-nonnegative_tol, 0) to zero after every
  /// accepted step; anything more negative aborts the run.
  bool enforce_nonnegative = false;
  double nonnegative_tol = 1e-9;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  /// Row-major, `dimension` values per time point.
  std::vector<double> data;
  std::size_t dimension = 0;
  std::size_t n_accepted = 0;
  std::size_t n_rejected = 0;
  std::string model_tag;
  std::vector<std::string> state_names;

  std::size_t size() const noexcept { return times.size(); }
  std::span<const double> state(std::size_t i) const {
    return {data.data() + i * dimension, dimension};
  }
  std::span<const double> back() const& { return state(size() - 1); }
  /// Copies out of a temporary trajectory instead of dangling.
  std::vector<double> back() && {
    const auto last = state(size() - 1);
    return {last.begin(), last.end()};
  }
  /// Time series of one component.
  std::vector<double> component(std::size_t k) const;
};

class IntegrationError : public NumericalError {
 public:
  enum class Kind { StepLimit, StepUnderflow, NonFinite, Negativity };

  IntegrationError(Kind kind, double t_reached, const std::string& what)
      : NumericalError(what), kind_(kind), t_reached_(t_reached) {}

  Kind kind() const noexcept { return kind_; }
  double t_reached() const noexcept { return t_reached_; }

 private:
  Kind kind_;
  double t_reached_;
};

/// Adaptive Dormand-Prince 5(4) integration from t0 to t1.
///
/// Without an output grid every accepted step is recorded (the first row is
/// y0 at t0). With a grid, states are reported exactly at the grid times
/// through the method's fourth-order continuous extension; the grid must be
/// nondecreasing and inside [t0, t1].
Trajectory integrate(const VectorField& rhs, std::span<const double> y0, double t0, double t1,
                     const IntegratorConfig& config = {},
                     std::optional<std::span<const double>> output_grid = std::nullopt);

/// Classical fixed-step use of the fifth-order Dormand-Prince weights;
/// returns the state at t1 after n_steps equal steps.
std::vector<double> integrate_fixed(const VectorField& rhs, std::span<const double> y0, double t0, double t1,
                                    std::size_t n_steps);

/// n uniformly spaced points from t0 to t1 inclusive.
std::vector<double> uniform_grid(double t0, double t1, std::size_t n);

}  // namespace floc
