#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "qtoa/wavepacket.hpp"

namespace qtoa::corrections {

using wavepacket::PacketParams;
using wavepacket::PhaseSpec;

/// A correction integral split by weight: for an integrand g(x) Phi(x),
/// base = integral g Phi and first_moment = integral x g Phi.
/// The fully weighted value for centre offset u = q0/sigma is first_moment + u*base.
struct ChiValue {
  double base = 0.0;
  double first_moment = 0.0;
  /// Bound on the floating-point error of base and first_moment.
  double rounding_bound = 0.0;

  double weighted(double u) const { return first_moment + u * base; }
  double weighted_rounding_bound(double u) const {
    return rounding_bound * (1.0 + std::abs(u));
  }
};

/// |envelope^{(n)}|^2 correction, evaluated exactly from Gaussian moments.
ChiValue chi1_general(int n, const PhaseSpec& spec);
/// Im[conj(envelope) envelope^{(2n+1)}] correction, evaluated exactly.
ChiValue chi2_general(int n, const PhaseSpec& spec);

/// The correction entering at hbar order `order` >= 0: chi2(n) for order 2n+1,
/// chi1(n) for order 2n.
ChiValue chi_for_order(int order, const PhaseSpec& spec);

enum class ExplicitForm {
  /// The closed-form term lists for orders 1 to 6 as they are usually quoted,
  /// written in terms of theta', theta'', ... and derivatives of sqrt(Phi).
  printed,
  /// Full expansion by the Leibniz rule and complete Bell polynomials.
  complete,
};

/// Explicit-formula evaluation of the correction at hbar order 1..6.
ChiValue chi_explicit(int order, const PhaseSpec& spec, ExplicitForm form = ExplicitForm::printed);

/// Contribution of hbar order `order` to tau/tau_class for given K and u != 0.
double series_term(int order, const ChiValue& chi, double k_sigma, double u);

/// Leading correction without phase: 1/(4 K^2).
double q_np(const PacketParams& params);
/// Leading correction of a phase that cancels orders 1 and 2:
/// (1/u) K^{-3} integral (x+u)(theta''' - theta'^3) Phi. Throws InvalidPhase when the
/// weighted order-1 or order-2 correction exceeds `cancellation_tol`.
double q_wp(const PacketParams& params, const PhaseSpec& spec, double cancellation_tol = 1e-8);

struct SeriesTerm {
  int order = 0;
  double value = 0.0;          // contribution to tau/tau_class
  double rounding_bound = 0.0;
};

struct CorrectionSeries {
  std::vector<SeriesTerm> terms;
  /// Last order included in the sum.
  int truncation_index = 0;
  /// Estimated error of the truncated sum, in units of tau_class.
  double truncation_error_estimate = 0.0;

  double sum() const;
};

struct AsymptoticOptions {
  /// Highest hbar order computed. In automatic mode orders 0..max_order are scanned.
  int max_order = 8;
  /// Truncate before the smallest nonzero correction instead of summing all orders.
  bool auto_truncate = true;
};

struct AsymptoticToa {
  double value = 0.0;       // time
  double tau_class = 0.0;   // time
  double error_estimate = 0.0;
  CorrectionSeries series;

  double ratio() const { return value / tau_class; }
};

/// Correction series in units of tau_class. Requires u != 0.
CorrectionSeries correction_series(const PhaseSpec& spec, double k_sigma, double u,
                                   const AsymptoticOptions& options = {});

/// Super-asymptotically summed expectation value. Throws DegenerateInput for q0 = 0 and
/// NumericalFailure when K <= 1 or no correction is smaller than the leading term.
AsymptoticToa asymptotic_toa(const PacketParams& params, const PhaseSpec& spec,
                             const AsymptoticOptions& options = {});

struct ExactToaOptions {
  /// Absolute accuracy target for the cumulative inner integrals.
  long double inner_tol = 1e-17L;
  /// Segment-count cap for the adaptive partition.
  std::size_t max_segments = 200000;
  /// Relative accuracy of the envelope samples. Zero means extended precision;
  /// envelopes built from double-precision data need about 2.2e-16.
  long double envelope_precision = 0.0L;
};

struct ExactToa {
  double value = 0.0;          // time
  double imag_part = 0.0;      // time; zero for an exactly Hermitian evaluation
  double error_estimate = 0.0; // time
  double tau_class = 0.0;
  std::size_t evaluations = 0;
  std::size_t segments = 0;

  double ratio() const { return value / tau_class; }
};

/// Dimensionless envelope x -> envelope(x), evaluated in extended precision.
using Envelope = std::function<std::complex<long double>(long double)>;

/// Direct evaluation of the arrival-time expectation value from the operator kernel
/// (mu / 4 i hbar)(q + q') sgn(q - q') by nested quadrature.
ExactToa exact_toa(const PacketParams& params, const PhaseSpec& spec,
                   const ExactToaOptions& options = {});

/// Same for an arbitrary envelope supported (numerically) on |x| <= half_width.
ExactToa exact_toa(const PacketParams& params, const Envelope& envelope, double half_width,
                   const ExactToaOptions& options = {});

}  // namespace qtoa::corrections
