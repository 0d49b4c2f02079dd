#include "floc/attachment.hpp"

#include <cmath>
#include <utility>

#include "floc/error.hpp"
#include "floc/growth.hpp"

namespace floc {

namespace {

double fd_step(double z) { return std::max(1e-6, 1e-6 * std::abs(z)); }

}  // namespace

AttachmentLaws::AttachmentLaws(LinearTotal alpha, ConstantDetachment beta)
    : linear_(alpha), constant_(beta) {}

AttachmentLaws AttachmentLaws::custom(AlphaFn alpha, BetaFn beta) {
  if (!alpha || !beta) throw ConfigError("attachment", "empty law");
  AttachmentLaws l;
  l.linear_.reset();
  l.constant_.reset();
  l.alpha_ = std::move(alpha);
  l.beta_ = std::move(beta);
  return l;
}

AttachmentLaws AttachmentLaws::custom(AlphaFn alpha, ConstantDetachment beta) {
  if (!alpha) throw ConfigError("attachment", "empty law");
  AttachmentLaws l;
  l.linear_.reset();
  l.constant_ = beta;
  l.alpha_ = std::move(alpha);
  return l;
}

AttachmentLaws AttachmentLaws::custom(LinearTotal alpha, BetaFn beta) {
  if (!beta) throw ConfigError("detachment", "empty law");
  AttachmentLaws l;
  l.linear_ = alpha;
  l.constant_.reset();
  l.beta_ = std::move(beta);
  return l;
}

double AttachmentLaws::alpha(double u, double v) const {
  if (linear_) return linear_->a * (u + v);
  return alpha_scale_ * alpha_(u, v);
}

double AttachmentLaws::alpha_du(double u, double v) const {
  if (linear_) return linear_->a;
  const double h = fd_step(u);
  return alpha_scale_ * (alpha_(u + h, v) - alpha_(u - h, v)) / (2.0 * h);
}

double AttachmentLaws::alpha_dv(double u, double v) const {
  if (linear_) return linear_->a;
  const double h = fd_step(v);
  return alpha_scale_ * (alpha_(u, v + h) - alpha_(u, v - h)) / (2.0 * h);
}

double AttachmentLaws::beta(double v) const {
  if (constant_) return constant_->b;
  return beta_scale_ * beta_(v);
}

double AttachmentLaws::beta_dv(double v) const {
  if (constant_) return 0.0;
  const double h = fd_step(v);
  return beta_scale_ * (beta_(v + h) - beta_(v - h)) / (2.0 * h);
}

double AttachmentLaws::ratio() const {
  if (!is_simple()) throw DomainError("a/b ratio requires linear-total attachment and constant detachment");
  return linear_->a / constant_->b;
}

AttachmentLaws AttachmentLaws::scaled(double inv_eps) const {
  AttachmentLaws l = *this;
  if (l.linear_) {
    l.linear_->a *= inv_eps;
  } else {
    l.alpha_scale_ *= inv_eps;
  }
  if (l.constant_) {
    l.constant_->b *= inv_eps;
  } else {
    l.beta_scale_ *= inv_eps;
  }
  return l;
}

void AttachmentLaws::validate(double upper) const {
  if (linear_ && !(linear_->a > 0.0 && std::isfinite(linear_->a)))
    throw ConfigError("attachment.linear_total.a", "must be positive and finite");
  if (constant_ && !(constant_->b > 0.0 && std::isfinite(constant_->b)))
    throw ConfigError("detachment.constant.b", "must be positive and finite");
  if (is_simple()) return;

  const auto grid = log_grid(1e-6, upper, 40);
  constexpr double kTol = 1e-9;
  for (double u : grid) {
    if (!(alpha(u, 0.0) > 0.0)) throw ConfigError("attachment", "alpha(u, 0) must be positive for u > 0");
    for (double v : grid) {
      const double au = alpha_du(u, v);
      const double av = alpha_dv(u, v);
      const double scale = kTol * (1.0 + std::abs(au) + std::abs(av));
      if (av < -scale) throw ConfigError("attachment", "alpha must be nondecreasing in v");
      if (au < av - scale) throw ConfigError("attachment", "d alpha/du must dominate d alpha/dv");
    }
  }
  double prev_flux = 0.0;
  double prev_beta = beta(grid.front());
  for (double v : grid) {
    const double b = beta(v);
    if (!(b > 0.0)) throw ConfigError("detachment", "beta(v) must be positive for v > 0");
    if (b > prev_beta * (1.0 + kTol)) throw ConfigError("detachment", "beta must be nonincreasing");
    const double flux = b * v;
    if (flux < prev_flux * (1.0 - kTol)) throw ConfigError("detachment", "beta(v) v must be nondecreasing");
    prev_flux = flux;
    prev_beta = b;
  }
}

}  // namespace floc
