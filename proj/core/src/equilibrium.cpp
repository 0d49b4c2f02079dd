#include "floc/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "floc/error.hpp"
#include "floc/roots.hpp"

namespace floc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kResidualTol = 1e-10;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

struct EffectiveRates {
  double a;
  double b;
};

EffectiveRates effective_rates(const Model& model) {
  if (!model.laws().is_simple())
    throw DomainError("closed-form equal-rate analysis needs linear-total attachment and constant detachment");
  const double inv_eps = 1.0 / model.params().eps();
  return {model.laws().linear_total()->a * inv_eps, model.laws().constant_detachment()->b * inv_eps};
}

void require_equal_rates(const Model& model) {
  if (!model.params().equal_removal())
    throw DomainError("equal-rate analysis requires D = D_u = D_v");
}

double full_residual(const Model& model, const FullState& st) {
  const auto y = st.to_array();
  std::array<double, 3> dy{};
  detail::full_rhs(model, y, dy);
  return std::max({std::abs(dy[0]), std::abs(dy[1]), std::abs(dy[2])});
}

double reduced_residual(const ReducedModel& model, const ReducedState& st) {
  const auto y = st.to_array();
  std::array<double, 2> dy{};
  detail::reduced_rhs(model, y, dy);
  return std::max(std::abs(dy[0]), std::abs(dy[1]));
}

std::string describe(const char* what, std::initializer_list<std::pair<const char*, double>> values) {
  std::ostringstream os;
  os.precision(17);
  os << what;
  for (const auto& [name, v] : values) os << ' ' << name << '=' << v;
  return os.str();
}

}  // namespace

double BreakEven::value_or_inf() const noexcept { return lambda.value_or(kInf); }

BreakEven break_even(const GrowthLaw& growth, double removal) {
  if (!(removal > 0.0)) throw ConfigError("removal", "break-even needs a positive removal rate");
  if (growth.is_monod()) {
    const auto& m = growth.monod();
    if (m.mu_max <= removal) return {};
    return {m.K * removal / (m.mu_max - removal)};
  }
  double hi = 1.0;
  while (growth(hi) <= removal) {
    hi *= 2.0;
    if (hi > 1e12) return {};
  }
  return {bisect([&](double s) { return growth(s) - removal; }, 0.0, hi)};
}

double phi(const GrowthLaw& growth, double removal, double s) {
  if (!(s >= 0.0)) throw ConfigError("s", "must be nonnegative");
  return growth(s) - removal;
}

UVH uvh_curves(double s, const Model& model) {
  require_equal_rates(model);
  const auto [a, b] = effective_rates(model);
  const double D = model.params().D;
  const auto lu = break_even(model.growth_u(), D);
  const double lv = break_even(model.growth_v(), D).value_or_inf();
  if (!lu.exists() || !(s > *lu.lambda && s < lv))
    throw DomainError(describe("s outside (lambda_u, lambda_v):", {{"s", s}, {"lambda_u", lu.value_or_inf()}, {"lambda_v", lv}}));
  const double pu = model.growth_u()(s) - D;
  const double pv = model.growth_v()(s) - D;
  UVH out;
  out.U = pu * (pv - b) / (a * (pv - pu));
  out.V = -pu / pv * out.U;
  out.H = D * pu * (pv - b) / (a * pv);
  return out;
}

std::string_view to_string(EquilibriumKind k) {
  return k == EquilibriumKind::Washout ? "washout" : "coexistence";
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::StableNode: return "stable_node";
    case Classification::StableFocus: return "stable_focus";
    case Classification::Saddle: return "saddle";
    case Classification::UnstableNode: return "unstable_node";
    case Classification::UnstableFocus: return "unstable_focus";
    case Classification::Marginal: return "marginal";
  }
  return "marginal";
}

bool is_stable(Classification c) { return c == Classification::StableNode || c == Classification::StableFocus; }

std::array<std::complex<double>, 2> Jacobian2::eigenvalues() const {
  const double tr = trace();
  const double dt = det();
  const double disc = tr * tr - 4.0 * dt;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    // avoid cancellation in the smaller root
    const double q = 0.5 * (tr + (tr >= 0.0 ? root : -root));
    double l1 = q != 0.0 ? dt / q : 0.0;
    double l2 = q;
    if (q == 0.0) l1 = l2 = 0.5 * tr;
    if (l1 > l2) std::swap(l1, l2);
    return {std::complex<double>(l1, 0.0), std::complex<double>(l2, 0.0)};
  }
  const double im = 0.5 * std::sqrt(-disc);
  return {std::complex<double>(0.5 * tr, -im), std::complex<double>(0.5 * tr, im)};
}

Classification classify(const std::array<std::complex<double>, 2>& ev) {
  const double r1 = ev[0].real(), r2 = ev[1].real();
  if (std::abs(r1) < kMarginalTolerance || std::abs(r2) < kMarginalTolerance) return Classification::Marginal;
  if (ev[0].imag() != 0.0) return r1 < 0.0 ? Classification::StableFocus : Classification::UnstableFocus;
  if (r1 < 0.0 && r2 < 0.0) return Classification::StableNode;
  if (r1 > 0.0 && r2 > 0.0) return Classification::UnstableNode;
  return Classification::Saddle;
}

Jacobian2 fd_jacobian(const PlaneField& field, const std::array<double, 2>& point) {
  std::array<std::array<double, 2>, 2> cols{};
  for (int k = 0; k < 2; ++k) {
    const double h = 1e-6 * std::max(1.0, std::abs(point[k]));
    auto plus = point, minus = point;
    plus[k] += h;
    minus[k] -= h;
    const auto fp = field(plus);
    const auto fm = field(minus);
    cols[k] = {(fp[0] - fm[0]) / (2.0 * h), (fp[1] - fm[1]) / (2.0 * h)};
  }
  return {cols[0][0], cols[1][0], cols[0][1], cols[1][1]};
}

double Equilibrium::s() const {
  return std::visit([](const auto& st) { return st.s; }, state);
}

double Equilibrium::x() const {
  if (const auto* f = std::get_if<FullState>(&state)) return f->u + f->v;
  return std::get<ReducedState>(state).x;
}

PlaneField equal_rate_plane_field(const Model& model) {
  return [&model](const std::array<double, 2>& uv) {
    const std::array<double, 3> y{model.params().S_in - uv[0] - uv[1], uv[0], uv[1]};
    std::array<double, 3> dy{};
    detail::full_rhs(model, y, dy);
    return std::array<double, 2>{dy[1], dy[2]};
  };
}

PlaneField reduced_plane_field(const ReducedModel& model) {
  return [&model](const std::array<double, 2>& sx) {
    std::array<double, 2> dy{};
    detail::reduced_rhs(model, sx, dy);
    return dy;
  };
}

Equilibrium classify_planar(Equilibrium eq, const PlaneField& field, const std::array<double, 2>& point) {
  eq.jacobian = fd_jacobian(field, point);
  eq.eigenvalues = eq.jacobian.eigenvalues();
  eq.classification = classify(eq.eigenvalues);
  return eq;
}

Equilibrium classify_reduced_2d(Equilibrium eq, const Model& model) {
  const auto* st = std::get_if<FullState>(&eq.state);
  if (!st) throw DomainError("expected a full (s, u, v) equilibrium");
  const double tol = kResidualTol * std::max(1.0, 1.0 / model.params().eps());
  if (!(eq.residual <= tol))
    throw DomainError(describe("equilibrium residual too large to classify:", {{"residual", eq.residual}}));
  return classify_planar(std::move(eq), equal_rate_plane_field(model), {st->u, st->v});
}

Equilibrium classify_reduced_2d(Equilibrium eq, const ReducedModel& model) {
  const auto* st = std::get_if<ReducedState>(&eq.state);
  if (!st) throw DomainError("expected a reduced (s, x) equilibrium");
  if (!(eq.residual <= kResidualTol))
    throw DomainError(describe("equilibrium residual too large to classify:", {{"residual", eq.residual}}));
  return classify_planar(std::move(eq), reduced_plane_field(model), {st->s, st->x});
}

Equilibrium washout_equal_rate(const Model& model) {
  Equilibrium eq;
  const FullState st{model.params().S_in, 0.0, 0.0};
  eq.state = st;
  eq.kind = EquilibriumKind::Washout;
  eq.residual = full_residual(model, st);
  return classify_reduced_2d(std::move(eq), model);
}

std::optional<Equilibrium> solve_coexistence_equal_D(const Model& model) {
  require_equal_rates(model);
  effective_rates(model);
  const auto& P = model.params();
  const double D = P.D;
  if (D >= model.growth_u()(P.S_in)) return std::nullopt;

  const double lu = *break_even(model.growth_u(), D).lambda;
  const double lv = break_even(model.growth_v(), D).value_or_inf();
  auto excess = [&](double s) { return D * (P.S_in - s) - uvh_curves(s, model).H; };

  const double top = std::min(lv, P.S_in);
  const double lo = lu + 1e-9 * (top - lu);
  if (!(excess(lo) > 0.0))
    throw NumericalError(describe("equal-rate bracket failure at lower end:", {{"s", lo}, {"excess", excess(lo)}, {"lambda_u", lu}}));
  double hi;
  if (lv > P.S_in) {
    hi = P.S_in;
  } else {
    // H has a pole at lambda_v: walk toward it until the sign flips
    double gap = 0.5 * (lv - lu);
    hi = lv - gap;
    while (excess(hi) > 0.0) {
      gap *= 0.5;
      if (gap < 1e-15 * lv)
        throw NumericalError(describe("equal-rate bracket failure near lambda_v:", {{"lambda_u", lu}, {"lambda_v", lv}}));
      hi = lv - gap;
    }
  }
  if (!(excess(hi) < 0.0))
    throw NumericalError(describe("equal-rate bracket failure at upper end:", {{"s", hi}, {"excess", excess(hi)}}));

  const double s_star = bisect(excess, lo, hi);
  if (!(s_star < P.S_in)) throw NumericalError(describe("coexistence s* not below S_in:", {{"s*", s_star}}));
  const auto c = uvh_curves(s_star, model);

  Equilibrium eq;
  const FullState st{s_star, c.U, c.V};
  eq.state = st;
  eq.kind = EquilibriumKind::Coexistence;
  eq.residual = full_residual(model, st);
  return classify_reduced_2d(std::move(eq), model);
}

std::vector<Equilibrium> equilibria_equal_D(const Model& model) {
  std::vector<Equilibrium> out{washout_equal_rate(model)};
  if (auto eq = solve_coexistence_equal_D(model)) out.push_back(std::move(*eq));
  return out;
}

ClosedFormStability closed_form_stability_equal_D(const FullState& eq, const Model& model) {
  require_equal_rates(model);
  const auto [a, b] = effective_rates(model);
  const double D = model.params().D;
  const double s = eq.s, u = eq.u, v = eq.v;
  const double pu = model.growth_u()(s) - D;
  const double pv = model.growth_v()(s) - D;
  const double dpu = model.growth_u().derivative(s);
  const double dpv = model.growth_v().derivative(s);

  ClosedFormStability out;
  out.jacobian = {-u * dpu + pu - a * (2.0 * u + v), -u * dpu - a * u + b, -v * dpv + a * (2.0 * u + v),
                  -v * dpv + pv + a * u - b};
  out.trace = -u * dpu - v * dpv + pu - a * (u + v) + pv - b;
  const double A = a * (u + v) + b - pv;
  const double B = a * (u + v) + b - pu;
  const double C = pu * pv + pu * (a * u - b) - pv * a * (2.0 * u + v);
  out.det = A * u * dpu + B * v * dpv + C;
  return out;
}

double gamma_of_x(double x, const ReducedModel& model) {
  if (!(x >= 0.0)) throw DomainError("gamma(x) requires x >= 0");
  return model.params().S_in - x * model.removal(x) / model.params().D;
}

double gamma_prime(double x, const ReducedModel& model) {
  return -(model.removal(x) + x * model.removal_dx(x)) / model.params().D;
}

double phi_of_x(double x, const ReducedModel& model) {
  if (!(x >= 0.0)) throw DomainError("phi(x) requires x >= 0");
  const auto& P = model.params();
  const auto lu = break_even(model.growth_u(), P.D_u);
  const auto lv = break_even(model.growth_v(), P.D_v);
  const double d = model.removal(x);
  auto excess = [&](double s) { return model.mu(s, x) - d; };

  double lo = 0.0;
  double hi;
  if (lu.exists() && lv.exists()) {
    lo = std::min(*lu.lambda, *lv.lambda);
    hi = std::max(*lu.lambda, *lv.lambda);
  } else {
    lo = lu.exists() ? *lu.lambda : (lv.exists() ? *lv.lambda : 0.0);
    hi = std::max(1.0, lo);
    if (excess(lo) > 0.0) lo = 0.0;
    while (excess(hi) < 0.0) {
      hi *= 2.0;
      if (hi > 1e12)
        throw NumericalError(describe("phi(x) bracket failure: growth saturates below d(x)", {{"x", x}, {"d", d}}));
    }
  }
  if (lo == hi) return lo;
  return bisect(excess, lo, hi);
}

double phi_prime(double x, const ReducedModel& model) {
  const double s = phi_of_x(x, model);
  return (model.removal_dx(x) - model.mu_dx(s, x)) / model.mu_ds(s, x);
}

double Gamma(double x, const ReducedModel& model) {
  if (x == 0.0) return model.params().S_in - break_even(model.growth_u(), model.params().D_u).value_or_inf();
  return gamma_of_x(x, model) - phi_of_x(x, model);
}

double Gamma_prime(double x, const ReducedModel& model) { return gamma_prime(x, model) - phi_prime(x, model); }

double Gamma_prime_fd(double x, const ReducedModel& model) {
  const double h = std::min(1e-5 * std::max(x, 1e-2), 0.5 * x);
  return (Gamma(x + h, model) - Gamma(x - h, model)) / (2.0 * h);
}

double det_formula_distinct_D(double s_star, double x_star, const ReducedModel& model) {
  return -model.params().D * x_star * model.mu_ds(s_star, x_star) * Gamma_prime(x_star, model);
}

std::size_t EquilibriumScan::positive_count() const {
  return static_cast<std::size_t>(std::count_if(equilibria.begin(), equilibria.end(),
                                                [](const Equilibrium& e) { return e.kind == EquilibriumKind::Coexistence; }));
}

EquilibriumScan find_equilibria_distinct_D(const Model& model, const ScanOptions& options) {
  const ReducedModel rm(model);
  const auto& P = model.params();
  EquilibriumScan scan;
  scan.x_max = options.x_max.value_or(P.D * P.S_in / P.D_v);
  scan.n_scan = options.n_scan;
  if (!(scan.x_max > 0.0)) throw ConfigError("x_max", "must be positive");
  if (options.n_scan < 100) throw ConfigError("n_scan", "must be at least 100");

  {
    Equilibrium w;
    const ReducedState st{P.S_in, 0.0};
    w.state = st;
    w.kind = EquilibriumKind::Washout;
    w.residual = reduced_residual(rm, st);
    scan.equilibria.push_back(classify_reduced_2d(std::move(w), rm));
  }

  const int n = options.n_scan;
  std::vector<double> xs(n + 1), gs(n + 1);
  for (int k = 0; k <= n; ++k) {
    xs[k] = scan.x_max * k / n;
    gs[k] = Gamma(xs[k], rm);
  }
  if (gs[n] > 0.0) {
    std::ostringstream os;
    os.precision(17);
    os << "Gamma(x_max) = " << gs[n] << " > 0 at x_max = " << scan.x_max << "; roots beyond the scan window may be missed";
    scan.warnings.push_back(os.str());
  }

  std::vector<double> roots;
  for (int k = 0; k < n; ++k) {
    if (k > 0 && gs[k] == 0.0) {
      roots.push_back(xs[k]);
      continue;
    }
    if (gs[k] == 0.0 || gs[k + 1] == 0.0) continue;
    if ((gs[k] > 0.0) != (gs[k + 1] > 0.0))
      roots.push_back(bisect([&](double x) { return Gamma(x, rm); }, xs[k], xs[k + 1], 1e-12));
  }
  if (gs[n] == 0.0) roots.push_back(xs[n]);

  for (double x_star : roots) {
    Equilibrium eq;
    const ReducedState st{gamma_of_x(x_star, rm), x_star};
    eq.state = st;
    eq.kind = EquilibriumKind::Coexistence;
    eq.residual = reduced_residual(rm, st);
    eq = classify_reduced_2d(std::move(eq), rm);
    const double gp = Gamma_prime_fd(x_star, rm);
    eq.gamma_prime_sign = sign_of(gp);
    const double det = eq.jacobian.det();
    if (std::abs(gp) > 1e-8 && std::abs(det) > 1e-10 && sign_of(det) != -sign_of(gp))
      throw NumericalError(describe("det J does not have the sign of -Gamma':", {{"x*", x_star}, {"det", det}, {"Gamma'", gp}}));
    scan.equilibria.push_back(std::move(eq));
  }
  return scan;
}

}  // namespace floc
