#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qtoa/wavepacket.hpp"

namespace qtoa::phase_solver {

using wavepacket::Parity;
using wavepacket::PhaseBasisTerm;
using wavepacket::PhaseSpec;

/// Single parity term c * T_{l,m}(x). Throws InvalidParameter for l == m.
PhaseSpec build_parity_phase(Parity parity, int l, int m, double coefficient);

/// a * odd(0,1) + b * even(0,1), the two-term phase used for second-order cancellation.
PhaseSpec two_term_phase(double a, double b);

struct TwoTermCoefficients {
  double a = 0.0;
  double b = 0.0;
};

/// The second-order-cancelling pair with the smallest positive even coefficient b at
/// offset u (the double root, zero discriminant): b = |u| / (16 sqrt(pi (3 - u^2))),
/// a = -2 sqrt3 b / u. Requires 0 < u^2 < 3.
TwoTermCoefficients double_root_coefficients(double u);
PhaseSpec double_root_phase(double u);

/// Absolute values of the three cancellation conditions for a phase at offset u:
/// integral Phi theta' (momentum), the weighted first-order correction and the
/// weighted second-order correction.
struct ConditionResiduals {
  double momentum = 0.0;
  double first_order = 0.0;
  double second_order = 0.0;
};

/// Exact evaluation from Gaussian moments.
ConditionResiduals condition_residuals(const PhaseSpec& spec, double u);
/// Independent evaluation by adaptive quadrature of the pointwise integrands.
ConditionResiduals condition_residuals_quadrature(const PhaseSpec& spec, double u,
                                                  double tol = 1e-13);

/// Weighted second-order correction of two_term_phase(a, b) at offset u, from moments.
double second_order_residual(double a, double b, double u);
/// The same quantity from its reduced closed form 16 pi (4 sqrt3 a b + u (a^2 + 4 b^2)) + u/4.
double second_order_residual_reduced(double a, double b, double u);

enum class SolveMethod { closed_form, numeric };

struct SolveReport {
  std::optional<double> a_plus;
  std::optional<double> a_minus;
  /// 768 pi b^2 sigma^2 - 256 pi b^2 q0^2 - q0^2 (units of length^2).
  double discriminant = 0.0;
  bool feasible = false;
  /// Residuals at the reported root of smaller |a| (or at the extremum of the
  /// residual when no real root exists).
  double residual_cond1 = 0.0;
  double residual_cond2 = 0.0;
  double residual_cond3 = 0.0;
  SolveMethod method = SolveMethod::closed_form;

  /// Root of smaller magnitude; empty when infeasible.
  std::optional<double> preferred_a() const;
};

/// Solves the second-order condition for the dimensionless odd coefficient a
/// given the even coefficient b = beta * sigma^2. The closed form requires q0 != 0.
SolveReport solve_a_from_b(double b, double sigma, double q0,
                           SolveMethod method = SolveMethod::closed_form);

struct GeneralSolveResult {
  bool feasible = false;
  PhaseSpec phase;
  std::vector<double> coefficients;
  /// Signed weighted corrections targeted by the solve, orders 1..N.
  std::vector<double> residuals;
  int starts = 0;
  int converged_starts = 0;
};

struct GeneralSolveOptions {
  double step_damping = 0.5;
  int max_iterations = 100;
  double tolerance = 1e-10;
};

/// Finds real coefficients c_k so that the phase sum c_k T_k cancels the
/// corrections of hbar orders 1..N (N in 1..3) at offset u. Damped Newton with a
/// finite-difference Jacobian and minimum-norm steps, started from every point of
/// {-1, -0.1, 0.1, 1}^size. The winner is the start with the smallest residual
/// (ties broken by lexicographic coefficient order).
GeneralSolveResult solve_phase_general(int N, std::span<const PhaseBasisTerm> basis, double u,
                                       const GeneralSolveOptions& options = {});

/// Check of the parity-basis construction for one (parity, l, m).
struct BasisConstructionReport {
  PhaseBasisTerm term;
  /// Exact momentum/first-moment residuals of the derivative used by the library.
  double library_momentum = 0.0;
  double library_first_moment = 0.0;
  /// The same residuals for the alternative derivative with the factorial ratio
  /// sqrt((2m+1)!/(2l+1)!) on the second odd-parity term.
  double alternative_momentum = 0.0;
  double alternative_first_moment = 0.0;
  /// Largest |library - alternative| over x in [-4, 4].
  double max_pointwise_mismatch = 0.0;
  /// The library derivative divided by the projection construction
  /// E[w p_l] p_m - E[w p_m] p_l (w = 1 or x); constant when they are proportional.
  double projection_ratio = 0.0;
  double projection_ratio_spread = 0.0;
};

BasisConstructionReport basis_construction_report(const PhaseBasisTerm& term);

}  // namespace qtoa::phase_solver
