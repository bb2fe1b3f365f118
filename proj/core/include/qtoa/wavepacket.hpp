#pragma once

#include <complex>
#include <vector>

#include "qtoa/numerics/polynomial.hpp"

namespace qtoa::wavepacket {

using numerics::ComplexPolynomial;
using numerics::RealPolynomial;

enum class UnitSystem { SI, natural };

/// Gaussian packet of width sigma centred at q0 < 0 moving towards the origin
/// with kinetic energy E0. All library math is done in the dimensionless
/// variables x = (q - q0)/sigma, K = k sigma and u = q0/sigma.
struct PacketParams {
  double sigma = 1.0;
  double q0 = -1.0;
  double E0 = 0.5;
  double mu = 1.0;
  double hbar = 1.0;
  UnitSystem units = UnitSystem::natural;

  /// Throws InvalidParameter unless sigma, E0, mu, hbar are positive and q0 is finite.
  void validate() const;

  double wavenumber() const;      // k = sqrt(2 mu E0)/hbar
  double speed() const;           // v0 = sqrt(2 E0/mu)
  double k_sigma() const;         // K
  double q0_over_sigma() const;   // u
  double classical_toa() const;   // -q0/v0
  double time_scale() const;      // sigma/v0
  double dispersion_time() const; // mu sigma^2/hbar

  /// Natural-unit packet with sigma = mu = hbar = 1 and the given K and u.
  static PacketParams dimensionless(double k_sigma, double u);
};

enum class Parity { odd, even };

/// One parity basis phase; l != m.
struct PhaseBasisTerm {
  Parity parity = Parity::odd;
  int l = 0;
  int m = 1;

  void validate() const;
  friend bool operator==(const PhaseBasisTerm&, const PhaseBasisTerm&) = default;
};

/// Dimensionless antiderivative T(x) of a parity basis phase, so that a term
/// with coefficient a contributes a*T(x) to theta(x).
RealPolynomial basis_phase(const PhaseBasisTerm& term);

/// dT/dx. The odd-parity phase has an even derivative and vice versa.
RealPolynomial basis_phase_derivative(const PhaseBasisTerm& term);

struct PhaseTerm {
  double coefficient = 0.0;
  PhaseBasisTerm basis;
};

/// Real polynomial phase theta(x) = sum_k c_k T_k(x). Default constructed = no phase.
class PhaseSpec {
 public:
  PhaseSpec() = default;
  explicit PhaseSpec(std::vector<PhaseTerm> terms);

  const std::vector<PhaseTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return theta_.is_zero(); }

  const RealPolynomial& theta() const noexcept { return theta_; }
  const RealPolynomial& theta_prime() const noexcept { return theta_prime_; }
  /// n-th derivative of theta, n >= 0.
  RealPolynomial derivative(int n) const;

  PhaseSpec scaled(double factor) const;
  friend PhaseSpec operator+(const PhaseSpec& a, const PhaseSpec& b);

 private:
  std::vector<PhaseTerm> terms_;
  RealPolynomial theta_;
  RealPolynomial theta_prime_;
};

/// Standard normal density, the dimensionless |envelope|^2.
double density(double x);

double phase_value(const PhaseSpec& spec, double x);
/// n-th derivative of theta at x, n >= 1, from the exact polynomial.
double phase_derivative(const PhaseSpec& spec, double x, int n);

/// Envelope (2 pi)^{-1/4} exp(-x^2/4) exp(i theta(x)).
std::complex<double> wavefunction(const PhaseSpec& spec, double x);
/// Same envelope evaluated in extended precision.
std::complex<long double> wavefunction_extended(const PhaseSpec& spec, long double x);

/// P_n with envelope^{(n)}(x) = P_n(x) envelope(x).
ComplexPolynomial derivative_polynomial(const PhaseSpec& spec, int n);

/// Half-width of the x-range outside of which the envelope is negligible:
/// 12 + max(|u|, deg theta').
double truncation_half_width(const PhaseSpec& spec, double u = 0.0);

/// h(kappa) = (2 pi)^{-1/2} * integral of envelope(x) exp(i kappa x) dx.
std::complex<double> envelope_transform(const PhaseSpec& spec, double kappa,
                                        double tol = 1e-13);

/// Momentum-space amplitude (2 pi hbar)^{-1/2} * integral psi0(q) exp(-i p q/hbar) dq
/// of the physical packet psi0(q) = sigma^{-1/2} envelope((q-q0)/sigma) exp(i k q).
std::complex<double> momentum_amplitude(const PacketParams& params, const PhaseSpec& spec,
                                        double p, double tol = 1e-13);

}  // namespace qtoa::wavepacket
