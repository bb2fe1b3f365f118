#include "qtoa/phase_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "qtoa/corrections.hpp"
#include "qtoa/errors.hpp"
#include "qtoa/numerics/quadrature.hpp"

namespace qtoa::phase_solver {

using numerics::pi;
using numerics::RealPolynomial;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double sup_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

double factorial(int n) {
  double r = 1.0;
  for (int j = 2; j <= n; ++j) r *= j;
  return r;
}

// Fills the residual fields of a report for the phase a*odd + b*even.
void fill_residuals(SolveReport& r, double a, double b, double u) {
  const auto res = condition_residuals(two_term_phase(a, b), u);
  r.residual_cond1 = res.momentum;
  r.residual_cond2 = res.first_order;
  r.residual_cond3 = res.second_order;
}

double residual_rounding(double a, double b, double u) {
  return corrections::chi1_general(1, two_term_phase(a, b)).weighted_rounding_bound(u);
}

// Sign-change bisection with a final Newton polish.
double refine_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 4.0 * kEps * std::max(std::abs(lo), std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x));
    const double d = (f(x + h) - f(x - h)) / (2.0 * h);
    if (d == 0.0) break;
    const double next = x - f(x) / d;
    if (!(std::abs(f(next)) < std::abs(f(x)))) break;
    x = next;
  }
  return x;
}

// Moves outward from `start` in direction `dir` until f changes sign relative to f(start).
std::optional<double> find_root_outward(const std::function<double(double)>& f, double start,
                                        double dir) {
  const double f0 = f(start);
  double step = std::max(1e-3, 1e-3 * std::abs(start));
  double prev = start;
  for (int i = 0; i < 200; ++i) {
    const double x = start + dir * step;
    const double fx = f(x);
    if ((fx < 0.0) != (f0 < 0.0) || fx == 0.0) {
      return refine_root(f, std::min(prev, x), std::max(prev, x));
    }
    prev = x;
    step *= 2.0;
    if (!std::isfinite(x)) break;
  }
  return std::nullopt;
}

SolveReport solve_numeric(double b, double sigma, double q0) {
  const double u = q0 / sigma;
  SolveReport r;
  r.method = SolveMethod::numeric;
  r.discriminant = 768.0 * pi * b * b * sigma * sigma - 256.0 * pi * b * b * q0 * q0 - q0 * q0;
  const std::function<double(double)> f = [&](double a) { return second_order_residual(a, b, u); };

  const double curvature = f(1.0) + f(-1.0) - 2.0 * f(0.0);
  const double curvature_scale = std::abs(f(1.0)) + std::abs(f(-1.0)) + 2.0 * std::abs(f(0.0));
  if (std::abs(curvature) <= 64.0 * kEps * curvature_scale) {
    // Residual linear in a: q0 = 0 forces a*b = 0.
    const double slope = f(1.0) - f(0.0);
    double root = 0.0;
    if (slope != 0.0) {
      auto found = find_root_outward(f, 0.0, -f(0.0) / slope >= 0.0 ? 1.0 : -1.0);
      root = found ? *found : 0.0;
    }
    if (std::abs(f(root)) <= 64.0 * residual_rounding(root, b, u) + 1e-14) {
      r.a_plus = root;
      r.a_minus = root;
      r.feasible = true;
    }
    fill_residuals(r, root, b, u);
    return r;
  }

  // Extremum of the quadratic residual by bisection on the sign of its slope.
  auto slope = [&](double a) {
    const double h = 1e-4 * std::max(1.0, std::abs(a));
    return f(a + h) - f(a - h);
  };
  double lo = -1.0, hi = 1.0;
  for (int i = 0; i < 200 && (slope(lo) < 0.0) == (slope(hi) < 0.0); ++i) {
    lo *= 2.0;
    hi *= 2.0;
  }
  const bool lo_negative = slope(lo) < 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((slope(mid) < 0.0) == lo_negative) lo = mid; else hi = mid;
  }
  const double vertex = 0.5 * (lo + hi);
  const double fv = f(vertex);
  const double rounding = residual_rounding(vertex, b, u);
  const double orientation = q0 < 0.0 ? -1.0 : 1.0;

  if (std::abs(fv) <= rounding) {
    r.a_plus = vertex;
    r.a_minus = vertex;
  } else if ((fv < 0.0) != (curvature < 0.0)) {
    const auto right = find_root_outward(f, vertex, 1.0);
    const auto left = find_root_outward(f, vertex, -1.0);
    if (right && left) {
      r.a_plus = orientation > 0.0 ? right : left;
      r.a_minus = orientation > 0.0 ? left : right;
    }
  }
  r.feasible = r.a_plus.has_value() && u * u < 3.0;
  if (!r.feasible) {
    r.a_plus.reset();
    r.a_minus.reset();
  }
  fill_residuals(r, r.preferred_a().value_or(vertex), b, u);
  return r;
}

}  // namespace

PhaseSpec build_parity_phase(Parity parity, int l, int m, double coefficient) {
  const PhaseBasisTerm term{parity, l, m};
  term.validate();
  return PhaseSpec({{coefficient, term}});
}

PhaseSpec two_term_phase(double a, double b) {
  return PhaseSpec({{a, {Parity::odd, 0, 1}}, {b, {Parity::even, 0, 1}}});
}

TwoTermCoefficients double_root_coefficients(double u) {
  if (!std::isfinite(u) || u == 0.0 || u * u >= 3.0)
    throw InvalidParameter("double_root_coefficients: need 0 < u^2 < 3");
  TwoTermCoefficients c;
  c.b = std::abs(u) / (16.0 * std::sqrt(pi * (3.0 - u * u)));
  c.a = -2.0 * std::sqrt(3.0) * c.b / u;
  return c;
}

PhaseSpec double_root_phase(double u) {
  const auto c = double_root_coefficients(u);
  return two_term_phase(c.a, c.b);
}

ConditionResiduals condition_residuals(const PhaseSpec& spec, double u) {
  ConditionResiduals r;
  r.momentum = std::abs(numerics::gaussian_expectation(spec.theta_prime()).value);
  r.first_order = std::abs(corrections::chi2_general(0, spec).weighted(u));
  r.second_order = std::abs(corrections::chi1_general(1, spec).weighted(u));
  return r;
}

ConditionResiduals condition_residuals_quadrature(const PhaseSpec& spec, double u, double tol) {
  const auto& tp = spec.theta_prime();
  const double inf = std::numeric_limits<double>::infinity();
  auto momentum = [&](double x) { return wavepacket::density(x) * tp(x); };
  auto first = [&](double x) { return (x + u) * wavepacket::density(x) * tp(x); };
  auto second = [&](double x) {
    const double t = tp(x);
    return (x + u) * wavepacket::density(x) * (t * t + 0.25 * x * x);
  };
  ConditionResiduals r;
  r.momentum = std::abs(numerics::integrate(momentum, -inf, inf, tol).value);
  r.first_order = std::abs(numerics::integrate(first, -inf, inf, tol).value);
  r.second_order = std::abs(numerics::integrate(second, -inf, inf, tol).value);
  return r;
}

double second_order_residual(double a, double b, double u) {
  return corrections::chi1_general(1, two_term_phase(a, b)).weighted(u);
}

double second_order_residual_reduced(double a, double b, double u) {
  return 16.0 * pi * (4.0 * std::sqrt(3.0) * a * b + u * (a * a + 4.0 * b * b)) + 0.25 * u;
}

std::optional<double> SolveReport::preferred_a() const {
  if (!a_plus || !a_minus) return a_plus ? a_plus : a_minus;
  return std::abs(*a_minus) < std::abs(*a_plus) ? a_minus : a_plus;
}

SolveReport solve_a_from_b(double b, double sigma, double q0, SolveMethod method) {
  if (!(std::isfinite(sigma) && sigma > 0.0)) throw InvalidParameter("sigma must be positive");
  if (!std::isfinite(q0)) throw InvalidParameter("q0 must be finite");
  if (!std::isfinite(b)) throw InvalidParameter("b must be finite");
  if (method == SolveMethod::numeric) return solve_numeric(b, sigma, q0);

  if (q0 == 0.0) {
    throw DegenerateInput("closed-form solution divides by q0; use the numeric method for q0 = 0");
  }
  const double u = q0 / sigma;
  const double t1 = 768.0 * pi * b * b * sigma * sigma;
  const double t2 = 256.0 * pi * b * b * q0 * q0;
  const double t3 = q0 * q0;
  SolveReport r;
  r.method = SolveMethod::closed_form;
  r.discriminant = t1 - t2 - t3;
  const double tolerance = 16.0 * kEps * (t1 + t2 + t3);
  const double vertex = -16.0 * std::sqrt(3.0) * pi * b * sigma / (8.0 * pi * q0);
  if (r.discriminant >= -tolerance && u * u < 3.0) {
    // A discriminant within its rounding bound is a double root.
    const double d = std::abs(r.discriminant) <= tolerance ? 0.0 : r.discriminant;
    const double root = std::sqrt(pi) * std::sqrt(d);
    r.a_plus = (root - 16.0 * std::sqrt(3.0) * pi * b * sigma) / (8.0 * pi * q0);
    r.a_minus = (-root - 16.0 * std::sqrt(3.0) * pi * b * sigma) / (8.0 * pi * q0);
    r.feasible = true;
  }
  fill_residuals(r, r.preferred_a().value_or(vertex), b, u);
  return r;
}

GeneralSolveResult solve_phase_general(int N, std::span<const PhaseBasisTerm> basis, double u,
                                       const GeneralSolveOptions& options) {
  if (N < 1 || N > 3) throw InvalidParameter("solve_phase_general: N must be 1, 2 or 3");
  if (static_cast<int>(basis.size()) < N)
    throw InvalidParameter("solve_phase_general: need at least N basis terms");
  if (!std::isfinite(u)) throw InvalidParameter("solve_phase_general: u must be finite");
  for (const auto& t : basis) t.validate();

  const int n = static_cast<int>(basis.size());
  auto make_phase = [&](const Eigen::VectorXd& c) {
    std::vector<wavepacket::PhaseTerm> terms;
    for (int k = 0; k < n; ++k) terms.push_back({c[k], basis[k]});
    return PhaseSpec(std::move(terms));
  };
  auto residual = [&](const Eigen::VectorXd& c) {
    const PhaseSpec spec = make_phase(c);
    Eigen::VectorXd r(N);
    for (int order = 1; order <= N; ++order)
      r[order - 1] = corrections::chi_for_order(order, spec).weighted(u);
    return r;
  };

  const double seeds[] = {-1.0, -0.1, 0.1, 1.0};
  int total = 1;
  for (int k = 0; k < n; ++k) total *= 4;

  GeneralSolveResult best;
  Eigen::VectorXd best_c;
  double best_norm = std::numeric_limits<double>::infinity();

  for (int s = 0; s < total; ++s) {
    Eigen::VectorXd c(n);
    for (int k = 0, idx = s; k < n; ++k, idx /= 4) c[n - 1 - k] = seeds[idx % 4];
    Eigen::VectorXd r = residual(c);
    bool converged = false;
    for (int it = 0; it < options.max_iterations; ++it) {
      if (sup_norm(r) < options.tolerance) {
        converged = true;
        break;
      }
      Eigen::MatrixXd J(N, n);
      for (int k = 0; k < n; ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(c[k]));
        Eigen::VectorXd cp = c, cm = c;
        cp[k] += h;
        cm[k] -= h;
        J.col(k) = (residual(cp) - residual(cm)) / (2.0 * h);
      }
      const Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(-r);
      if (!step.allFinite()) break;
      double lambda = 1.0;
      bool moved = false;
      while (lambda > 1e-12) {
        const Eigen::VectorXd trial = c + lambda * step;
        const Eigen::VectorXd rt = residual(trial);
        if (rt.norm() < r.norm()) {
          c = trial;
          r = rt;
          moved = true;
          break;
        }
        lambda *= options.step_damping;
      }
      if (!moved) break;
    }
    if (!converged && sup_norm(r) < options.tolerance) converged = true;
    ++best.starts;
    if (converged) ++best.converged_starts;

    const double norm = sup_norm(r);
    const bool better =
        norm < best_norm ||
        (norm == best_norm && std::lexicographical_compare(c.data(), c.data() + n, best_c.data(),
                                                           best_c.data() + n));
    if (better) {
      best_norm = norm;
      best_c = c;
      best.residuals.assign(r.data(), r.data() + N);
    }
  }

  best.coefficients.assign(best_c.data(), best_c.data() + n);
  best.feasible = best_norm < options.tolerance;
  best.phase = make_phase(best_c);
  return best;
}

BasisConstructionReport basis_construction_report(const PhaseBasisTerm& term) {
  term.validate();
  BasisConstructionReport rep;
  rep.term = term;
  const int s = term.parity == Parity::odd ? 0 : 1;
  const int l = term.l, m = term.m;

  const RealPolynomial lib = wavepacket::basis_phase_derivative(term);
  RealPolynomial alt = lib;
  if (term.parity == Parity::odd) {
    const double common = 2.0 * std::sqrt(pi) / (std::ldexp(1.0, l) * std::ldexp(1.0, m));
    const double c1 = common / factorial(l) * std::sqrt(factorial(2 * l) / factorial(2 * m));
    const double c2 = common / factorial(m) * std::sqrt(factorial(2 * m + 1) / factorial(2 * l + 1));
    alt = numerics::hermite_polynomial(2 * m) * c1 - numerics::hermite_polynomial(2 * l) * c2;
  }
  const RealPolynomial x = RealPolynomial::monomial(1);
  rep.library_momentum = numerics::gaussian_expectation(lib).value;
  rep.library_first_moment = numerics::gaussian_expectation(x * lib).value;
  rep.alternative_momentum = numerics::gaussian_expectation(alt).value;
  rep.alternative_first_moment = numerics::gaussian_expectation(x * alt).value;
  for (int i = 0; i <= 800; ++i) {
    const double xi = -4.0 + 0.01 * i;
    rep.max_pointwise_mismatch = std::max(rep.max_pointwise_mismatch, std::abs(lib(xi) - alt(xi)));
  }

  // Projection construction with weight w = 1 (even derivative) or w = x (odd derivative).
  const RealPolynomial pl = numerics::hermite_polynomial(2 * l + s);
  const RealPolynomial pm = numerics::hermite_polynomial(2 * m + s);
  const RealPolynomial w = s == 0 ? RealPolynomial::constant(1.0) : x;
  const double el = numerics::gaussian_expectation(w * pl).value;
  const double em = numerics::gaussian_expectation(w * pm).value;
  const RealPolynomial proj = pm * el - pl * em;
  const int top = std::max(lib.degree(), proj.degree());
  rep.projection_ratio = lib.coefficient(top) / proj.coefficient(top);
  double scale = 0.0;
  for (double c : lib.coefficients()) scale = std::max(scale, std::abs(c));
  for (int k = 0; k <= top; ++k) {
    rep.projection_ratio_spread =
        std::max(rep.projection_ratio_spread,
                 std::abs(lib.coefficient(k) - rep.projection_ratio * proj.coefficient(k)) / scale);
  }
  return rep;
}

}  // namespace qtoa::phase_solver
