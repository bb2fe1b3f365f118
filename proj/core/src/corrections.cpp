#include "qtoa/corrections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qtoa/errors.hpp"

namespace qtoa::corrections {

using numerics::ComplexPolynomial;
using numerics::RealPolynomial;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxExplicitOrder = 6;

// base/first moment of Q(x) Phi(x), with a rounding bound scaled by the
// absolute size of the summed moment contributions.
ChiValue moments_of(const RealPolynomial& q, int operations) {
  const auto base = numerics::gaussian_expectation(q);
  const auto first = numerics::gaussian_expectation(RealPolynomial::monomial(1) * q);
  ChiValue v;
  v.base = base.value;
  v.first_moment = first.value;
  const double gamma = static_cast<double>(q.degree() + operations + 8) * kEps;
  v.rounding_bound = gamma * std::max(base.magnitude, first.magnitude);
  return v;
}

RealPolynomial abs_squared(const ComplexPolynomial& p) {
  const RealPolynomial re = numerics::real_part(p);
  const RealPolynomial im = numerics::imag_part(p);
  return re * re + im * im;
}

// R_n with (sqrt Phi)^{(n)} = R_n sqrt Phi.
RealPolynomial sqrt_density_factor(int n) {
  RealPolynomial r = RealPolynomial::constant(1.0);
  const RealPolynomial half_x = RealPolynomial::monomial(1, 0.5);
  for (int j = 0; j < n; ++j) r = r.derivative() - half_x * r;
  return r;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// P_n assembled from the Leibniz rule applied to sqrt(Phi) * exp(i theta), with the
// derivatives of exp(i theta) given by complete Bell polynomials in i theta^{(j)}.
ComplexPolynomial leibniz_bell_factor(int n, const PhaseSpec& spec) {
  std::vector<ComplexPolynomial> y(n + 1);
  for (int j = 1; j <= n; ++j)
    y[j] = numerics::to_complex(spec.derivative(j)) * std::complex<double>(0.0, 1.0);
  std::vector<ComplexPolynomial> bell(n + 1);
  bell[0] = ComplexPolynomial::constant(1.0);
  for (int k = 0; k < n; ++k) {
    ComplexPolynomial next;
    for (int j = 0; j <= k; ++j) next += bell[k - j] * y[j + 1] * binomial(k, j);
    bell[k + 1] = next;
  }
  ComplexPolynomial p;
  for (int j = 0; j <= n; ++j)
    p += numerics::to_complex(sqrt_density_factor(n - j)) * bell[j] * binomial(n, j);
  return p;
}

RealPolynomial printed_integrand(int order, const PhaseSpec& spec) {
  const RealPolynomial t1 = spec.derivative(1);
  const RealPolynomial t2 = spec.derivative(2);
  const RealPolynomial t3 = spec.derivative(3);
  const RealPolynomial t5 = spec.derivative(5);
  auto pow = [](const RealPolynomial& p, int e) {
    RealPolynomial r = RealPolynomial::constant(1.0);
    for (int j = 0; j < e; ++j) r *= p;
    return r;
  };
  switch (order) {
    case 1:
      return t1;
    case 2: {
      const RealPolynomial r1 = sqrt_density_factor(1);
      return t1 * t1 + r1 * r1;
    }
    case 3:
      return t3 - pow(t1, 3);
    case 4: {
      const RealPolynomial r2 = sqrt_density_factor(2);
      return r2 * r2 + t2 * t2 + pow(t1, 4);
    }
    case 5:
      return t5 + pow(t1, 5) - t3 * t1 * t1 * 10.0 - t1 * t2 * t2 * 15.0;
    case 6: {
      const RealPolynomial r3 = sqrt_density_factor(3);
      return r3 * r3 - t2 * t1 * r3 * 6.0 + t2 * t2 * t1 * t1 * 9.0 + t3 * t3 + pow(t1, 6) +
             t3 * pow(t1, 3) * 2.0;
    }
    default:
      throw InvalidParameter("chi_explicit: order must be in 1..6");
  }
}

}  // namespace

ChiValue chi1_general(int n, const PhaseSpec& spec) {
  if (n < 0) throw InvalidParameter("chi1_general: n must be nonnegative");
  return moments_of(abs_squared(wavepacket::derivative_polynomial(spec, n)), 4 * n);
}

ChiValue chi2_general(int n, const PhaseSpec& spec) {
  if (n < 0) throw InvalidParameter("chi2_general: n must be nonnegative");
  const ComplexPolynomial p = wavepacket::derivative_polynomial(spec, 2 * n + 1);
  return moments_of(numerics::imag_part(p), 4 * n + 2);
}

ChiValue chi_for_order(int order, const PhaseSpec& spec) {
  if (order < 0) throw InvalidParameter("correction order must be nonnegative");
  return order % 2 == 0 ? chi1_general(order / 2, spec) : chi2_general(order / 2, spec);
}

ChiValue chi_explicit(int order, const PhaseSpec& spec, ExplicitForm form) {
  if (order < 1 || order > kMaxExplicitOrder)
    throw InvalidParameter("chi_explicit: order must be in 1..6");
  if (form == ExplicitForm::printed) return moments_of(printed_integrand(order, spec), 2 * order);
  const int n = order / 2;
  if (order % 2 == 0) return moments_of(abs_squared(leibniz_bell_factor(n, spec)), 4 * order);
  return moments_of(numerics::imag_part(leibniz_bell_factor(order, spec)), 4 * order);
}

double series_term(int order, const ChiValue& chi, double k_sigma, double u) {
  if (u == 0.0) throw DegenerateInput("series terms relative to tau_class need q0 != 0");
  const double scale = std::pow(k_sigma, order);
  if (order % 2 == 0) return chi.weighted(u) / (u * scale);
  const int n = order / 2;
  const double sign = (n % 2 == 0) ? -1.0 : 1.0;
  return sign * chi.weighted(u) / (u * scale);
}

double q_np(const PacketParams& params) {
  params.validate();
  const double K = params.k_sigma();
  return chi1_general(1, PhaseSpec{}).base / (K * K);
}

double q_wp(const PacketParams& params, const PhaseSpec& spec, double cancellation_tol) {
  params.validate();
  const double u = params.q0_over_sigma();
  if (u == 0.0) throw DegenerateInput("q_wp: q0 must be nonzero");
  const double r1 = std::abs(chi2_general(0, spec).weighted(u));
  const double r2 = std::abs(chi1_general(1, spec).weighted(u));
  if (r1 > cancellation_tol || r2 > cancellation_tol) {
    throw InvalidPhase("q_wp: phase does not cancel the first two corrections (residuals " +
                       std::to_string(r1) + ", " + std::to_string(r2) + ")");
  }
  const double K = params.k_sigma();
  return chi_explicit(3, spec, ExplicitForm::printed).weighted(u) / (u * K * K * K);
}

double CorrectionSeries::sum() const {
  double s = 0.0;
  for (const auto& t : terms)
    if (t.order <= truncation_index) s += t.value;
  return s;
}

CorrectionSeries correction_series(const PhaseSpec& spec, double k_sigma, double u,
                                   const AsymptoticOptions& options) {
  if (options.max_order < 0) throw InvalidParameter("max_order must be nonnegative");
  if (!(k_sigma > 0.0)) throw InvalidParameter("k sigma must be positive");
  if (u == 0.0) throw DegenerateInput("correction series relative to tau_class need q0 != 0");

  const int computed = options.auto_truncate ? options.max_order : options.max_order + 1;
  CorrectionSeries s;
  for (int order = 0; order <= computed; ++order) {
    const ChiValue chi = chi_for_order(order, spec);
    const double scale = std::abs(u) * std::pow(k_sigma, order);
    s.terms.push_back({order, series_term(order, chi, k_sigma, u),
                       chi.weighted_rounding_bound(u) / scale});
  }

  double abs_sum = 0.0;
  double rounding = 0.0;
  for (const auto& t : s.terms) {
    abs_sum += std::abs(t.value);
    rounding += t.rounding_bound;
  }
  const double floor = rounding + static_cast<double>(s.terms.size() + 1) * kEps * abs_sum;

  if (!options.auto_truncate) {
    s.truncation_index = options.max_order;
    s.truncation_error_estimate = std::max(std::abs(s.terms.back().value), floor);
    s.terms.pop_back();
    return s;
  }

  int smallest = -1;
  for (std::size_t i = 1; i < s.terms.size(); ++i) {
    const auto& t = s.terms[i];
    if (std::abs(t.value) <= t.rounding_bound) continue;  // numerically zero
    if (smallest < 0 || std::abs(t.value) < std::abs(s.terms[smallest].value))
      smallest = static_cast<int>(i);
  }
  if (smallest < 0) {
    s.truncation_index = options.max_order;
    s.truncation_error_estimate = floor;
  } else {
    s.truncation_index = smallest - 1;
    s.truncation_error_estimate = std::max(std::abs(s.terms[smallest].value), floor);
  }
  return s;
}

AsymptoticToa asymptotic_toa(const PacketParams& params, const PhaseSpec& spec,
                             const AsymptoticOptions& options) {
  params.validate();
  const double K = params.k_sigma();
  const double u = params.q0_over_sigma();
  if (u == 0.0) throw DegenerateInput("asymptotic_toa: classical arrival time is zero for q0 = 0");

  AsymptoticToa out;
  out.tau_class = params.classical_toa();
  out.series = correction_series(spec, K, u, options);
  const double ratio = out.series.sum();
  out.value = out.tau_class * ratio;
  out.error_estimate = std::abs(out.tau_class) * out.series.truncation_error_estimate;

  if (K <= 1.0) {
    throw NumericalFailure("asymptotic series diverges for k*sigma = " + std::to_string(K) +
                               " <= 1; use the exact evaluation",
                           out.value, out.error_estimate);
  }
  if (options.auto_truncate && out.series.truncation_error_estimate >= 1.0) {
    throw NumericalFailure("asymptotic series has no correction smaller than the leading term "
                           "at k*sigma = " + std::to_string(K) + "; use the exact evaluation",
                           out.value, out.error_estimate);
  }
  return out;
}

}  // namespace qtoa::corrections
