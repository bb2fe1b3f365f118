#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "test_support.hpp"

using namespace qtoa::phase_solver;
using qtoa::test::kPi;
using qtoa::wavepacket::PhaseSpec;

namespace {

std::vector<PhaseBasisTerm> small_basis() {
  std::vector<PhaseBasisTerm> out;
  for (auto parity : {Parity::odd, Parity::even})
    for (int l = 0; l <= 2; ++l)
      for (int m = 0; m <= 2; ++m)
        if (l != m) out.push_back({parity, l, m});
  return out;
}

// Smallest |b| with a real root at offset u (sigma = 1).
double minimal_b(double u) { return std::abs(u) / (16.0 * std::sqrt(kPi * (3.0 - u * u))); }

}  // namespace

TEST(ParityPhase, SingleTermsCancelLinearConditions) {
  for (const auto& t : small_basis()) {
    const auto spec = build_parity_phase(t.parity, t.l, t.m, 1.0);
    for (double u : {-5.0 / 3.0, -0.4, 2.0}) {
      const auto q = condition_residuals_quadrature(spec, u);
      EXPECT_LT(q.momentum, 1e-10) << t.l << t.m;
      EXPECT_LT(q.first_order, 1e-10) << t.l << t.m;
      const auto e = condition_residuals(spec, u);
      EXPECT_LT(e.momentum, 1e-12);
      EXPECT_LT(e.first_order, 1e-12);
    }
  }
  EXPECT_THROW(build_parity_phase(Parity::odd, 1, 1, 1.0), qtoa::InvalidParameter);
}

TEST(ParityPhase, LinearityOfLinearConditions) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> ul(-50.0, 50.0);
  for (const auto& t : small_basis()) {
    const double lambda = ul(rng);
    const auto spec = build_parity_phase(t.parity, t.l, t.m, 1.0).scaled(lambda);
    const auto e = condition_residuals(spec, -1.0);
    EXPECT_LT(e.momentum, 1e-12 * std::abs(lambda));
    EXPECT_LT(e.first_order, 1e-12 * std::abs(lambda));
  }
}

TEST(SecondOrder, CaptionPairsCancelExactly) {
  for (const auto& c : {qtoa::test::thermal_pair(), qtoa::test::neutron_pair()}) {
    EXPECT_NEAR(second_order_residual(c.a, c.b, c.u), 0.0, 1e-12);
    EXPECT_NEAR(second_order_residual_reduced(c.a, c.b, c.u), 0.0, 1e-12);
    const auto q = condition_residuals_quadrature(two_term_phase(c.a, c.b), c.u);
    EXPECT_LT(q.second_order, 1e-10);
  }
}

TEST(SecondOrder, BareDensityTermIsQuarterU) {
  // integral of (x + u) (d sqrt(Phi)/dx)^2 = u/4, checked against an independent Simpson sum
  for (double u : {-2.0, -0.7, 1.3}) {
    const double oracle = static_cast<double>(qtoa::test::simpson(
        [u](long double x) {
          return (x + u) * 0.25L * x * x * std::exp(-x * x / 2) /
                 std::sqrt(2 * 3.14159265358979323846L);
        },
        -14.0L, 14.0L));
    EXPECT_NEAR(oracle, u / 4, 1e-13);
    EXPECT_NEAR(second_order_residual(0.0, 0.0, u), oracle, 1e-14);
  }
}

TEST(SecondOrder, MomentFormMatchesReducedForm) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> uc(-1.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const double a = uc(rng), b = uc(rng), u = 2 * uc(rng);
    const double m = second_order_residual(a, b, u);
    EXPECT_NEAR(m, second_order_residual_reduced(a, b, u), 1e-11 * (1 + std::abs(m)));
  }
}

TEST(DoubleRoot, ReproducesCaptionPairs) {
  for (const auto& c : {qtoa::test::thermal_pair(), qtoa::test::neutron_pair()}) {
    const auto d = double_root_coefficients(c.u);
    EXPECT_NEAR(d.a, c.a, 1e-15);
    EXPECT_NEAR(d.b, c.b, 1e-15);
  }
  EXPECT_THROW(double_root_coefficients(0.0), qtoa::InvalidParameter);
  EXPECT_THROW(double_root_coefficients(-2.0), qtoa::InvalidParameter);
}

TEST(SolveAFromB, CaptionValuesClosedForm) {
  {
    const auto c = qtoa::test::neutron_pair();
    const auto r = solve_a_from_b(c.b, 6.0, -10.0);
    ASSERT_TRUE(r.feasible);
    EXPECT_NEAR(r.discriminant, 0.0, 1e-12);
    EXPECT_NEAR(*r.a_plus, c.a, 1e-12);
    EXPECT_NEAR(*r.a_minus, c.a, 1e-12);
    EXPECT_LT(r.residual_cond3, 1e-12);
  }
  {
    const auto c = qtoa::test::thermal_pair();
    const auto r = solve_a_from_b(c.b, 1.0, c.u);
    ASSERT_TRUE(r.feasible);
    EXPECT_NEAR(r.discriminant, 0.0, 1e-12);
    EXPECT_NEAR(*r.a_plus, c.a, 1e-12);
    EXPECT_NEAR(*r.a_minus, c.a, 1e-12);
  }
}

TEST(SolveAFromB, CaptionValuesNumeric) {
  const auto c = qtoa::test::neutron_pair();
  const auto r = solve_a_from_b(c.b, 6.0, -10.0, SolveMethod::numeric);
  ASSERT_TRUE(r.feasible);
  EXPECT_LT(qtoa::test::rel_diff(*r.preferred_a(), c.a), 1e-8);
}

TEST(SolveAFromB, DistinctRootsBothReported) {
  const auto r = solve_a_from_b(0.0728, 1.0, -1.5588);
  ASSERT_TRUE(r.feasible);
  EXPECT_GT(r.discriminant, 0.0);
  EXPECT_NE(*r.a_plus, *r.a_minus);
  for (double a : {*r.a_plus, *r.a_minus})
    EXPECT_NEAR(second_order_residual(a, 0.0728, -1.5588), 0.0, 1e-12);
  EXPECT_EQ(std::abs(*r.preferred_a()), std::min(std::abs(*r.a_plus), std::abs(*r.a_minus)));
}

TEST(SolveAFromB, ClosedFormAgreesWithNumericOnRandomSamples) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> uu(0.1, 1.7), stretch(0.01, 3.0), coin(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double u = (coin(rng) < 0.5 ? -1.0 : 1.0) * uu(rng);
    const double b = (coin(rng) < 0.5 ? -1.0 : 1.0) * minimal_b(u) * (1.0 + stretch(rng));
    const auto cf = solve_a_from_b(b, 1.0, u);
    const auto nm = solve_a_from_b(b, 1.0, u, SolveMethod::numeric);
    ASSERT_TRUE(cf.feasible && nm.feasible) << u << " " << b;
    EXPECT_LT(qtoa::test::rel_diff(*nm.a_plus, *cf.a_plus), 1e-8) << u << " " << b;
    EXPECT_LT(qtoa::test::rel_diff(*nm.a_minus, *cf.a_minus), 1e-8) << u << " " << b;
  }
}

TEST(SolveAFromB, InfeasibleRegions) {
  for (double b : {0.0, 0.01, 1.0, 100.0}) {
    for (auto method : {SolveMethod::closed_form, SolveMethod::numeric}) {
      // sigma^2 <= q0^2/3
      EXPECT_FALSE(solve_a_from_b(b, 1.0, -std::sqrt(3.0), method).feasible);
      EXPECT_FALSE(solve_a_from_b(b, 1.0, -2.5, method).feasible);
    }
  }
  const auto zero_b = solve_a_from_b(0.0, 1.0, -1.0);
  EXPECT_FALSE(zero_b.feasible);
  EXPECT_FALSE(zero_b.preferred_a().has_value());
  EXPECT_NEAR(zero_b.residual_cond3, 0.25, 1e-15);
}

TEST(SolveAFromB, CentredPacket) {
  EXPECT_THROW(solve_a_from_b(0.1, 1.0, 0.0), qtoa::DegenerateInput);
  const auto r = solve_a_from_b(0.1, 1.0, 0.0, SolveMethod::numeric);
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(*r.preferred_a(), 0.0, 1e-14);
  EXPECT_THROW(solve_a_from_b(0.1, 0.0, -1.0), qtoa::InvalidParameter);
}

TEST(GeneralSolve, FirstOrderAnyBasisTerm) {
  const std::vector<PhaseBasisTerm> basis{{Parity::odd, 0, 1}};
  const auto r = solve_phase_general(1, basis, -1.0);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.converged_starts, r.starts);
  const auto q = condition_residuals_quadrature(r.phase, -1.0);
  EXPECT_LT(q.momentum, 1e-10);
  EXPECT_LT(q.first_order, 1e-10);
}

TEST(GeneralSolve, SecondOrderTwoTermBasis) {
  const std::vector<PhaseBasisTerm> basis{{Parity::odd, 0, 1}, {Parity::even, 0, 1}};
  const double u = -5.0 / 3.0;
  const auto r = solve_phase_general(2, basis, u);
  ASSERT_TRUE(r.feasible);
  ASSERT_EQ(r.coefficients.size(), 2u);
  const auto q = condition_residuals_quadrature(r.phase, u);
  EXPECT_LT(q.first_order, 1e-8);
  EXPECT_LT(q.second_order, 1e-8);
  // The solution set is a curve through the caption pair; the solver lands on some
  // member, which must satisfy the reduced quadratic too.
  EXPECT_NEAR(second_order_residual_reduced(r.coefficients[0], r.coefficients[1], u), 0.0, 1e-9);

  EXPECT_FALSE(solve_phase_general(2, basis, -2.0).feasible);
}

TEST(GeneralSolve, ThirdOrder) {
  const double u = -1.0;
  const std::vector<PhaseBasisTerm> basis{
      {Parity::odd, 0, 1}, {Parity::even, 0, 1}, {Parity::even, 0, 2}};
  const auto r = solve_phase_general(3, basis, u);
  ASSERT_TRUE(r.feasible);
  const auto q = condition_residuals_quadrature(r.phase, u);
  EXPECT_LT(q.first_order, 1e-8);
  EXPECT_LT(q.second_order, 1e-8);
  const auto third = qtoa::corrections::chi_explicit(3, r.phase, qtoa::corrections::ExplicitForm::complete);
  EXPECT_LT(std::abs(third.weighted(u)), 1e-8);
}

TEST(GeneralSolve, Validation) {
  const std::vector<PhaseBasisTerm> basis{{Parity::odd, 0, 1}};
  EXPECT_THROW(solve_phase_general(0, basis, -1.0), qtoa::InvalidParameter);
  EXPECT_THROW(solve_phase_general(4, basis, -1.0), qtoa::InvalidParameter);
  EXPECT_THROW(solve_phase_general(2, basis, -1.0), qtoa::InvalidParameter);
}

TEST(GeneralSolve, Deterministic) {
  const std::vector<PhaseBasisTerm> basis{{Parity::odd, 0, 1}, {Parity::even, 0, 1}};
  const auto a = solve_phase_general(2, basis, -1.2);
  const auto b = solve_phase_general(2, basis, -1.2);
  EXPECT_EQ(a.coefficients, b.coefficients);
}

TEST(BasisReport, LibraryConstructionSatisfiesConditions) {
  for (const auto& t : small_basis()) {
    const auto r = basis_construction_report(t);
    EXPECT_LT(std::abs(r.library_momentum), 1e-12);
    EXPECT_LT(std::abs(r.library_first_moment), 1e-12);
    EXPECT_LT(r.projection_ratio_spread, 1e-10 * std::abs(r.projection_ratio));
    if (t.parity == Parity::even) EXPECT_EQ(r.max_pointwise_mismatch, 0.0);
  }
  // The alternative factorial ratio breaks the momentum condition for odd parity.
  const auto odd = basis_construction_report({Parity::odd, 0, 1});
  EXPECT_GT(std::abs(odd.alternative_momentum), 0.1);
  EXPECT_GT(odd.max_pointwise_mismatch, 0.1);
}
