#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "floc/growth.hpp"
#include "floc/model.hpp"
#include "floc/slowfast.hpp"

namespace floc {

/// Break-even concentration: the s where mu(s) equals a removal rate.
struct BreakEven {
  std::optional<double> lambda;

  bool exists() const noexcept { return lambda.has_value(); }
  /// lambda, or +inf when mu never reaches the removal rate
  double value_or_inf() const noexcept;
};

BreakEven break_even(const GrowthLaw& growth, double removal);

/// mu(s) - removal
double phi(const GrowthLaw& growth, double removal, double s);

/// Equal-removal-rate characteristic curves: u* = U(s*), v* = V(s*) and
/// D (S_in - s*) = H(s*), defined on (lambda_u, lambda_v).
struct UVH {
  double U = 0.0;
  double V = 0.0;
  double H = 0.0;
};

/// Requires D = D_u = D_v and linear-total / constant laws. Attachment and
/// detachment rates enter as a / eps and b / eps. Throws DomainError when s
/// lies outside (lambda_u, lambda_v).
UVH uvh_curves(double s, const Model& model);

enum class EquilibriumKind { Washout, Coexistence };

enum class Classification { StableNode, StableFocus, Saddle, UnstableNode, UnstableFocus, Marginal };

std::string_view to_string(EquilibriumKind k);
std::string_view to_string(Classification c);
bool is_stable(Classification c);

struct Jacobian2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  double trace() const noexcept { return a11 + a22; }
  double det() const noexcept { return a11 * a22 - a12 * a21; }
  std::array<std::complex<double>, 2> eigenvalues() const;
};

/// Real parts within this of zero are reported as Marginal.
inline constexpr double kMarginalTolerance = 1e-8;

Classification classify(const std::array<std::complex<double>, 2>& eigenvalues);

using PlaneField = std::function<std::array<double, 2>(const std::array<double, 2>&)>;

/// Central differences with step 1e-6 * max(1, |y_i|).
Jacobian2 fd_jacobian(const PlaneField& field, const std::array<double, 2>& point);

struct Equilibrium {
  std::variant<FullState, ReducedState> state;
  EquilibriumKind kind = EquilibriumKind::Washout;
  Classification classification = Classification::Marginal;
  std::array<std::complex<double>, 2> eigenvalues{};
  Jacobian2 jacobian{};
  /// max-norm of the model right-hand side at `state`
  double residual = 0.0;
  /// sign of Gamma'(x*) on the distinct-rate path
  std::optional<int> gamma_prime_sign;

  double s() const;
  double x() const;
};

/// The (u, v) plane dynamics with s = S_in - u - v (equal removal rates).
PlaneField equal_rate_plane_field(const Model& model);
/// The slow (s, x) dynamics.
PlaneField reduced_plane_field(const ReducedModel& model);

/// Fills jacobian, eigenvalues and classification from a planar field.
/// The residual must be below 1e-10 scaled by max(1, 1/eps).
Equilibrium classify_reduced_2d(Equilibrium eq, const Model& model);
Equilibrium classify_reduced_2d(Equilibrium eq, const ReducedModel& model);
Equilibrium classify_planar(Equilibrium eq, const PlaneField& field, const std::array<double, 2>& point);

/// Washout (S_in, 0, 0) of the full model, classified in the (u, v) plane.
Equilibrium washout_equal_rate(const Model& model);

/// Unique coexistence steady state for equal removal rates and linear-total /
/// constant laws; nullopt iff D >= mu_u(S_in).
std::optional<Equilibrium> solve_coexistence_equal_D(const Model& model);

/// Washout followed by the coexistence state when it exists.
std::vector<Equilibrium> equilibria_equal_D(const Model& model);

/// Trace and determinant of the (u, v)-plane Jacobian at the coexistence
/// state from the closed-form expressions (effective rates a/eps, b/eps).
struct ClosedFormStability {
  Jacobian2 jacobian;
  double trace = 0.0;
  double det = 0.0;  // A u phi_u' + B v phi_v' + C form
};
ClosedFormStability closed_form_stability_equal_D(const FullState& eq, const Model& model);

/// s = gamma(x) = S_in - x d(x) / D
double gamma_of_x(double x, const ReducedModel& model);
double gamma_prime(double x, const ReducedModel& model);

/// Unique s with mu(s, x) = d(x) (bisection).
double phi_of_x(double x, const ReducedModel& model);
/// Implicit-function derivative (d'(x) - mu_x) / mu_s at s = phi(x).
double phi_prime(double x, const ReducedModel& model);

/// Gamma(x) = gamma(x) - phi(x); Gamma(0) = S_in - lambda_u.
double Gamma(double x, const ReducedModel& model);
double Gamma_prime(double x, const ReducedModel& model);
double Gamma_prime_fd(double x, const ReducedModel& model);

/// -D x* mu_s(s*, x*) Gamma'(x*). Expanding the reduced Jacobian gives mu_s here;
/// the variant with mu_x does not reproduce det J.
double det_formula_distinct_D(double s_star, double x_star, const ReducedModel& model);

struct ScanOptions {
  std::optional<double> x_max;  // default D S_in / D_v
  int n_scan = 2000;
};

struct EquilibriumScan {
  std::vector<Equilibrium> equilibria;  // washout first, then increasing x*
  std::vector<std::string> warnings;
  double x_max = 0.0;
  int n_scan = 0;

  std::size_t positive_count() const;
};

/// Scans Gamma on a uniform grid over (0, x_max], refines sign changes by
/// bisection and classifies every equilibrium of the reduced model.
EquilibriumScan find_equilibria_distinct_D(const Model& model, const ScanOptions& options = {});

}  // namespace floc
