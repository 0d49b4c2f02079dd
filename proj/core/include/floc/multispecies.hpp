#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "floc/growth.hpp"
#include "floc/integrator.hpp"
#include "floc/model.hpp"

namespace floc {

/// n competing species on the slow manifold of fast attachment with
/// alpha_i = sum_j a_ij x_j and beta_i = b_i. Removal rates must be equal.
class MultiSpeciesModel {
 public:
  MultiSpeciesModel(ChemostatParams params, std::vector<GrowthLaw> growth_u, std::vector<GrowthLaw> growth_v,
                    std::vector<std::vector<double>> A, std::vector<double> b);

  std::size_t size() const noexcept { return b_.size(); }
  const ChemostatParams& params() const noexcept { return params_; }
  const GrowthLaw& growth_u(std::size_t i) const { return growth_u_.at(i); }
  const GrowthLaw& growth_v(std::size_t i) const { return growth_v_.at(i); }
  const std::vector<std::vector<double>>& A() const noexcept { return A_; }
  const std::vector<double>& b() const noexcept { return b_; }
  bool attachment_enabled() const noexcept { return attachment_; }

  /// sum_j a_ij x_j
  double alpha(std::size_t i, std::span<const double> x) const;

  /// Same species with attachment switched off: every q_i stays 1 and the
  /// model is the classical planktonic chemostat.
  MultiSpeciesModel planktonic_only() const;

 private:
  ChemostatParams params_;
  std::vector<GrowthLaw> growth_u_;
  std::vector<GrowthLaw> growth_v_;
  std::vector<std::vector<double>> A_;
  std::vector<double> b_;
  bool attachment_ = true;
};

/// q_i = 1 / (1 + (1/b_i) sum_j a_ij x_j)
std::vector<double> q_bar(std::span<const double> x, const MultiSpeciesModel& model);

/// Derivative of (s, x_1, ..., x_n).
std::vector<double> multispecies_reduced_rhs(std::span<const double> state, const MultiSpeciesModel& model);

/// dq_i/dtau = -alpha_i(x) q_i + b_i (1 - q_i)
std::vector<double> fast_q_rhs(std::span<const double> q, std::span<const double> x,
                               const MultiSpeciesModel& model);

namespace detail {
void multispecies_rhs(const MultiSpeciesModel& m, std::span<const double> y, std::span<double> dy);
}  // namespace detail

VectorField multispecies_field(const MultiSpeciesModel& model);

/// y0 = (s, x_1, ..., x_n); columns s, x1, ..., xn.
Trajectory simulate_multispecies(const MultiSpeciesModel& model, std::span<const double> y0, double t_end,
                                 std::size_t points = 500);

}  // namespace floc
