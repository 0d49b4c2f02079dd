#pragma once

#include <functional>
#include <optional>
#include <string>

namespace floc {

/// alpha(u, v) = a (u + v)
struct LinearTotal {
  double a = 1.0;
};

/// beta(v) = b
struct ConstantDetachment {
  double b = 1.0;
};

/// Specific attachment rate alpha(u, v) of planktonic biomass and specific
/// detachment rate beta(v) of attached biomass.
class AttachmentLaws {
 public:
  using AlphaFn = std::function<double(double, double)>;
  using BetaFn = std::function<double(double)>;

  AttachmentLaws() : AttachmentLaws(LinearTotal{}, ConstantDetachment{}) {}
  AttachmentLaws(LinearTotal alpha, ConstantDetachment beta);

  /// Custom laws. Derivatives are taken by central differences.
  static AttachmentLaws custom(AlphaFn alpha, BetaFn beta);
  static AttachmentLaws custom(AlphaFn alpha, ConstantDetachment beta);
  static AttachmentLaws custom(LinearTotal alpha, BetaFn beta);

  double alpha(double u, double v) const;
  double alpha_du(double u, double v) const;
  double alpha_dv(double u, double v) const;
  double beta(double v) const;
  double beta_dv(double v) const;

  /// True for the LinearTotal / ConstantDetachment pair, where the slow
  /// manifold and the equal-rate equilibrium have closed forms.
  bool is_simple() const noexcept { return linear_.has_value() && constant_.has_value(); }
  std::optional<LinearTotal> linear_total() const { return linear_; }
  std::optional<ConstantDetachment> constant_detachment() const { return constant_; }

  /// a / b for simple laws; throws DomainError otherwise.
  double ratio() const;

  /// Same laws with both rates divided by eps (the fast-attachment scaling).
  AttachmentLaws scaled(double inv_eps) const;

  /// Grid checks of positivity and the monotonicity assumptions over
  /// [1e-6, upper]^2. Throws ConfigError on violation.
  void validate(double upper) const;

 private:
  std::optional<LinearTotal> linear_;
  std::optional<ConstantDetachment> constant_;
  AlphaFn alpha_;
  BetaFn beta_;
  double alpha_scale_ = 1.0;
  double beta_scale_ = 1.0;
};

}  // namespace floc
