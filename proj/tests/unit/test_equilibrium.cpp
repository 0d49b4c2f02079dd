#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "floc/equilibrium.hpp"
#include "floc/error.hpp"
#include "floc/slowfast.hpp"

namespace floc {
namespace {

using test::fig4_model;

TEST(BreakEven, MonodClosedForm) {
  EXPECT_DOUBLE_EQ(*break_even(Monod{1.0, 1.0}, 0.5).lambda, 1.0);
  EXPECT_NEAR(*break_even(Monod{0.7, 1.0}, 0.5).lambda, 2.5, 1e-14);
  EXPECT_FALSE(break_even(Monod{1.0, 1.0}, 1.5).exists());
  EXPECT_FALSE(break_even(Monod{1.0, 1.0}, 1.0).exists());
  EXPECT_TRUE(std::isinf(break_even(Monod{1.0, 1.0}, 1.5).value_or_inf()));
}

TEST(BreakEven, CustomLawByBisection) {
  const auto mu = GrowthLaw::custom([](double s) { return 2.0 * s / (1.0 + s); });
  const auto be = break_even(mu, 1.0);
  ASSERT_TRUE(be.exists());
  EXPECT_NEAR(mu(*be.lambda), 1.0, 1e-12);
  EXPECT_NEAR(*be.lambda, 1.0, 1e-12);
  const auto capped = GrowthLaw::custom([](double s) { return 1.0 - std::exp(-s); });
  EXPECT_FALSE(break_even(capped, 1.5).exists());
}

TEST(Phi, HandValues) {
  EXPECT_NEAR(phi(Monod{1.0, 1.0}, 0.5, 1.5), 0.1, 1e-15);
  EXPECT_NEAR(phi(Monod{0.7, 1.0}, 0.5, 1.5), -0.08, 1e-15);
  EXPECT_EQ(phi(Monod{1.0, 1.0}, 0.5, 1.0), 0.0);
}

TEST(UvhCurves, HandValuesAtFig4) {
  const auto c = uvh_curves(1.5, fig4_model());
  EXPECT_NEAR(c.U, 0.1 * -0.58 / (1.0 * -0.18), 1e-14);
  EXPECT_NEAR(c.U, 0.322222, 1e-6);
  EXPECT_NEAR(c.V, 1.25 * c.U, 1e-14);
  EXPECT_NEAR(c.V, 0.402778, 1e-6);
  EXPECT_NEAR(c.H, 0.3625, 1e-14);
}

TEST(UvhCurves, OutsideBreakEvenIntervalIsADomainError) {
  const auto m = fig4_model();
  EXPECT_THROW((void)uvh_curves(0.9, m), DomainError);
  EXPECT_THROW((void)uvh_curves(1.0, m), DomainError);
  EXPECT_THROW((void)uvh_curves(2.6, m), DomainError);
}

TEST(UvhCurves, PositiveAndHIncreasingOnTheInterval) {
  const auto m = fig4_model();
  const double lo = 1.0, hi = 2.5;
  double prev_H = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double s = lo + (hi - lo) * k / 101.0;
    const auto c = uvh_curves(s, m);
    EXPECT_GT(c.U, 0.0);
    EXPECT_GT(c.V, 0.0);
    EXPECT_GT(c.H, 0.0);
    EXPECT_GT(c.H, prev_H) << "s = " << s;
    prev_H = c.H;
  }
}

TEST(EqualRates, Fig4CoexistenceFrozenOracle) {
  // steady state of a 3000-time-unit high-accuracy run polished by Newton
  const auto eq = solve_coexistence_equal_D(fig4_model());
  ASSERT_TRUE(eq.has_value());
  const auto& st = std::get<FullState>(eq->state);
  EXPECT_NEAR(st.s, 1.42255654, 1e-8);
  EXPECT_NEAR(st.u, 0.29157022, 1e-8);
  EXPECT_NEAR(st.v, 0.28587324, 1e-8);
}

TEST(EqualRates, Fig4CoexistenceMatchesLongSimulation) {
  const auto m = fig4_model();
  const auto eq = solve_coexistence_equal_D(m);
  ASSERT_TRUE(eq.has_value());
  const auto traj = simulate_full(m, {2.0, 0.05, 0.05}, 2000.0, 3);
  const auto& st = std::get<FullState>(eq->state);
  EXPECT_NEAR(traj.back()[0], st.s, 1e-7);
  EXPECT_NEAR(traj.back()[1], st.u, 1e-7);
  EXPECT_NEAR(traj.back()[2], st.v, 1e-7);
}

TEST(EqualRates, Fig4CoexistenceProperties) {
  const auto m = fig4_model();
  const auto eq = solve_coexistence_equal_D(m);
  ASSERT_TRUE(eq.has_value());
  const auto& st = std::get<FullState>(eq->state);
  EXPECT_GT(st.s, 1.0);
  EXPECT_LT(st.s, 1.5);  // H(1.5) = 0.3625 > D (S_in - 1.5) = 0.25
  EXPECT_GT(st.u, 0.0);
  EXPECT_GT(st.v, 0.0);
  EXPECT_NEAR(st.s + st.u + st.v, 2.0, 1e-10);
  EXPECT_LT(eq->residual, 1e-10);
  EXPECT_EQ(eq->kind, EquilibriumKind::Coexistence);
  EXPECT_TRUE(is_stable(eq->classification));
  EXPECT_LT(eq->jacobian.trace(), 0.0);
  EXPECT_GT(eq->jacobian.det(), 0.0);

  // phi_u(s*) > 0 > phi_v(s*)
  const double pu = phi(m.growth_u(), 0.5, st.s), pv = phi(m.growth_v(), 0.5, st.s);
  EXPECT_GT(pu, 0.0);
  EXPECT_LT(pv, 0.0);
  // phi_u - a x = -b v / u and phi_v - b = -a x u / v
  const double a = 1.0, b = 0.5, x = st.u + st.v;
  EXPECT_LT(test::rel_diff(pu - a * x, -b * st.v / st.u), 1e-8);
  EXPECT_LT(test::rel_diff(pv - b, -a * x * st.u / st.v), 1e-8);
}

TEST(EqualRates, EpsilonScalesTheExchangeRates) {
  // oracle: long runs of the full model at each eps
  for (double eps : {2.0, 0.5, 0.1}) {
    const auto m = fig4_model(eps);
    const auto eq = solve_coexistence_equal_D(m);
    ASSERT_TRUE(eq.has_value());
    const auto traj = simulate_full(m, {2.0, 0.05, 0.05}, 1500.0, 3);
    EXPECT_NEAR(traj.back()[0], eq->s(), 1e-7) << "eps " << eps;
    EXPECT_NEAR(traj.back()[1] + traj.back()[2], eq->x(), 1e-7) << "eps " << eps;
  }
  EXPECT_NEAR(solve_coexistence_equal_D(fig4_model(2.0))->s(), 1.39265, 1e-5);
  EXPECT_NEAR(solve_coexistence_equal_D(fig4_model(0.5))->s(), 1.43856, 1e-5);
  EXPECT_NEAR(solve_coexistence_equal_D(fig4_model(0.1))->s(), 1.45188, 1e-5);
}

TEST(EqualRates, NoCoexistenceAboveMuUOfSin) {
  const auto m = fig4_model(std::nullopt, 0.7);
  EXPECT_FALSE(solve_coexistence_equal_D(m).has_value());
  const auto all = equilibria_equal_D(m);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0].kind, EquilibriumKind::Washout);
  EXPECT_TRUE(is_stable(all[0].classification));
  EXPECT_LT(all[0].eigenvalues[0].real(), 0.0);
  EXPECT_LT(all[0].eigenvalues[1].real(), 0.0);
}

TEST(EqualRates, Fig4WashoutIsASaddle) {
  const auto all = equilibria_equal_D(fig4_model());
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].kind, EquilibriumKind::Washout);
  EXPECT_EQ(all[0].classification, Classification::Saddle);
  EXPECT_EQ(all[1].kind, EquilibriumKind::Coexistence);
}

TEST(EqualRates, RequiresSimpleLawsAndEqualRates) {
  ChemostatParams p{0.5, 2.0, 0.5, 0.3, std::nullopt};
  const Model distinct(p, Monod{1.0, 1.0}, Monod{0.7, 1.0}, AttachmentLaws{});
  EXPECT_THROW((void)solve_coexistence_equal_D(distinct), DomainError);
}

TEST(ClosedFormStability, MatchesFiniteDifferences) {
  for (double eps : {1.0, 0.5, 2.0}) {
    const auto m = fig4_model(eps);
    const auto eq = solve_coexistence_equal_D(m);
    ASSERT_TRUE(eq.has_value());
    const auto cf = closed_form_stability_equal_D(std::get<FullState>(eq->state), m);
    const auto& fd = eq->jacobian;
    EXPECT_NEAR(cf.jacobian.a11, fd.a11, 1e-6);
    EXPECT_NEAR(cf.jacobian.a12, fd.a12, 1e-6);
    EXPECT_NEAR(cf.jacobian.a21, fd.a21, 1e-6);
    EXPECT_NEAR(cf.jacobian.a22, fd.a22, 1e-6);
    EXPECT_LT(test::rel_diff(cf.trace, fd.trace()), 1e-6);
    // A u phi_u' + B v phi_v' + C against J11 J22 - J12 J21
    EXPECT_LT(test::rel_diff(cf.det, cf.jacobian.det()), 1e-12);
    EXPECT_LT(test::rel_diff(cf.det, fd.det()), 1e-5);
    EXPECT_LT(cf.trace, 0.0);
    EXPECT_GT(cf.det, 0.0);
  }
}

TEST(Classify, ConstructedCases) {
  const PlaneField saddle = [](const std::array<double, 2>& y) { return std::array<double, 2>{y[0], -y[1]}; };
  Equilibrium eq;
  eq.state = ReducedState{0.0, 0.0};
  eq = classify_planar(eq, saddle, {0.0, 0.0});
  EXPECT_EQ(eq.classification, Classification::Saddle);
  EXPECT_NEAR(eq.eigenvalues[0].real(), -1.0, 1e-9);
  EXPECT_NEAR(eq.eigenvalues[1].real(), 1.0, 1e-9);

  EXPECT_EQ(classify({std::complex<double>(-1, 0), std::complex<double>(-2, 0)}), Classification::StableNode);
  EXPECT_EQ(classify({std::complex<double>(1, 0), std::complex<double>(2, 0)}), Classification::UnstableNode);
  EXPECT_EQ(classify({std::complex<double>(-1, -1), std::complex<double>(-1, 1)}), Classification::StableFocus);
  EXPECT_EQ(classify({std::complex<double>(1, -1), std::complex<double>(1, 1)}), Classification::UnstableFocus);
  EXPECT_EQ(classify({std::complex<double>(-1, 0), std::complex<double>(5e-9, 0)}), Classification::Marginal);
}

TEST(Classify, EigenvaluesFromTraceAndDeterminant) {
  const Jacobian2 j{0.1, 1.0, 0.0, -1.0};
  const auto ev = j.eigenvalues();
  EXPECT_DOUBLE_EQ(ev[0].real(), -1.0);
  EXPECT_DOUBLE_EQ(ev[1].real(), 0.1);
  const Jacobian2 rot{-0.5, -2.0, 2.0, -0.5};
  const auto ev2 = rot.eigenvalues();
  EXPECT_DOUBLE_EQ(ev2[0].real(), -0.5);
  EXPECT_DOUBLE_EQ(std::abs(ev2[0].imag()), 2.0);
  EXPECT_EQ(classify(ev2), Classification::StableFocus);
}

TEST(Classify, RejectsLargeResidual) {
  Equilibrium eq;
  eq.state = FullState{1.5, 0.2, 0.2};
  eq.residual = 1e-3;
  EXPECT_THROW((void)classify_reduced_2d(eq, fig4_model()), DomainError);
}

}  // namespace
}  // namespace floc
