#include "qtoa/wavepacket.hpp"

#include <cmath>
#include <string>

#include "qtoa/errors.hpp"
#include "qtoa/numerics/quadrature.hpp"

namespace qtoa::wavepacket {

using numerics::pi;

namespace {

constexpr int kMaxBasisIndex = 40;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

double factorial(int n) {
  double r = 1.0;
  for (int j = 2; j <= n; ++j) r *= j;
  return r;
}

// Prefactors of the two Hermite terms: theta' = c_first H_{2m+s} - c_second H_{2l+s},
// s = 0 for the odd phase and s = 1 for the even phase.
struct BasisCoefficients {
  double c_first;
  double c_second;
  int shift;
};

BasisCoefficients basis_coefficients(const PhaseBasisTerm& t) {
  t.validate();
  const int s = t.parity == Parity::odd ? 0 : 1;
  const double fl = factorial(2 * t.l + s);
  const double fm = factorial(2 * t.m + s);
  const double common = 2.0 * std::sqrt(pi) / (std::ldexp(1.0, t.l) * std::ldexp(1.0, t.m));
  return {common / factorial(t.l) * std::sqrt(fl / fm),
          common / factorial(t.m) * std::sqrt(fm / fl), s};
}

}  // namespace

void PacketParams::validate() const {
  if (!positive_finite(sigma)) throw InvalidParameter("sigma must be positive and finite");
  if (!positive_finite(E0)) throw InvalidParameter("E0 must be positive and finite");
  if (!positive_finite(mu)) throw InvalidParameter("mu must be positive and finite");
  if (!positive_finite(hbar)) throw InvalidParameter("hbar must be positive and finite");
  if (!std::isfinite(q0)) throw InvalidParameter("q0 must be finite");
}

double PacketParams::wavenumber() const { return std::sqrt(2.0 * mu * E0) / hbar; }
double PacketParams::speed() const { return std::sqrt(2.0 * E0 / mu); }
double PacketParams::k_sigma() const { return wavenumber() * sigma; }
double PacketParams::q0_over_sigma() const { return q0 / sigma; }
double PacketParams::classical_toa() const { return -q0 / speed(); }
double PacketParams::time_scale() const { return sigma / speed(); }
double PacketParams::dispersion_time() const { return mu * sigma * sigma / hbar; }

PacketParams PacketParams::dimensionless(double k_sigma, double u) {
  PacketParams p;
  p.sigma = 1.0;
  p.mu = 1.0;
  p.hbar = 1.0;
  p.q0 = u;
  p.E0 = 0.5 * k_sigma * k_sigma;
  p.units = UnitSystem::natural;
  return p;
}

void PhaseBasisTerm::validate() const {
  if (l < 0 || m < 0) throw InvalidParameter("phase basis indices must be nonnegative");
  if (l == m)
    throw InvalidParameter("phase basis requires l != m (got l = m = " + std::to_string(l) + ")");
  if (l > kMaxBasisIndex || m > kMaxBasisIndex)
    throw InvalidParameter("phase basis indices above " + std::to_string(kMaxBasisIndex) +
                           " are not supported");
}

RealPolynomial basis_phase(const PhaseBasisTerm& term) {
  const auto c = basis_coefficients(term);
  const int nm = 2 * term.m + c.shift + 1;
  const int nl = 2 * term.l + c.shift + 1;
  return numerics::hermite_polynomial(nm) * (c.c_first / (2.0 * nm)) -
         numerics::hermite_polynomial(nl) * (c.c_second / (2.0 * nl));
}

RealPolynomial basis_phase_derivative(const PhaseBasisTerm& term) {
  const auto c = basis_coefficients(term);
  return numerics::hermite_polynomial(2 * term.m + c.shift) * c.c_first -
         numerics::hermite_polynomial(2 * term.l + c.shift) * c.c_second;
}

PhaseSpec::PhaseSpec(std::vector<PhaseTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (!std::isfinite(t.coefficient)) throw InvalidParameter("phase coefficient must be finite");
    theta_ += basis_phase(t.basis) * t.coefficient;
  }
  theta_prime_ = theta_.derivative();
}

RealPolynomial PhaseSpec::derivative(int n) const {
  if (n < 0) throw InvalidParameter("derivative order must be nonnegative");
  RealPolynomial d = theta_;
  for (int j = 0; j < n; ++j) d = d.derivative();
  return d;
}

PhaseSpec PhaseSpec::scaled(double factor) const {
  std::vector<PhaseTerm> t = terms_;
  for (auto& term : t) term.coefficient *= factor;
  return PhaseSpec(std::move(t));
}

PhaseSpec operator+(const PhaseSpec& a, const PhaseSpec& b) {
  std::vector<PhaseTerm> t = a.terms_;
  t.insert(t.end(), b.terms_.begin(), b.terms_.end());
  return PhaseSpec(std::move(t));
}

double density(double x) { return numerics::standard_normal_density(x); }

double phase_value(const PhaseSpec& spec, double x) { return spec.theta()(x); }

double phase_derivative(const PhaseSpec& spec, double x, int n) {
  if (n < 1) throw InvalidParameter("phase_derivative: order must be >= 1");
  return spec.derivative(n)(x);
}

std::complex<double> wavefunction(const PhaseSpec& spec, double x) {
  const double amp = std::pow(2.0 * pi, -0.25) * std::exp(-0.25 * x * x);
  return std::polar(amp, spec.theta()(x));
}

std::complex<long double> wavefunction_extended(const PhaseSpec& spec, long double x) {
  const long double two_pi = 6.283185307179586476925286766559005768L;
  const long double amp = std::pow(two_pi, -0.25L) * std::exp(-0.25L * x * x);
  return std::polar(amp, spec.theta().evaluate<long double>(x));
}

ComplexPolynomial derivative_polynomial(const PhaseSpec& spec, int n) {
  if (n < 0) throw InvalidParameter("derivative_polynomial: order must be nonnegative");
  const ComplexPolynomial step =
      ComplexPolynomial({0.0, {-0.5, 0.0}}) +
      numerics::to_complex(spec.theta_prime()) * std::complex<double>(0.0, 1.0);
  ComplexPolynomial p = ComplexPolynomial::constant(1.0);
  for (int j = 0; j < n; ++j) p = p.derivative() + step * p;
  return p;
}

double truncation_half_width(const PhaseSpec& spec, double u) {
  const double deg = spec.theta_prime().is_zero() ? 0.0 : spec.theta_prime().degree();
  return 12.0 + std::max(std::abs(u), deg);
}

std::complex<double> envelope_transform(const PhaseSpec& spec, double kappa, double tol) {
  const double L = truncation_half_width(spec);
  auto f = [&](double x) { return wavefunction(spec, x); };
  const auto r = numerics::integrate_oscillatory(f, kappa, -L, L, tol);
  return r.value / std::sqrt(2.0 * pi);
}

std::complex<double> momentum_amplitude(const PacketParams& params, const PhaseSpec& spec,
                                        double p, double tol) {
  params.validate();
  const double kappa = (params.wavenumber() - p / params.hbar) * params.sigma;
  const std::complex<double> h = envelope_transform(spec, kappa, tol);
  return std::sqrt(params.sigma / params.hbar) * std::polar(1.0, kappa * params.q0_over_sigma()) * h;
}

}  // namespace qtoa::wavepacket
