#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "qtoa/corrections.hpp"
#include "qtoa/wavepacket.hpp"

namespace qtoa::imprint {

using wavepacket::PacketParams;
using wavepacket::PhaseSpec;

/// Wavefunction values on a position grid.
struct SampledWavefunction {
  std::vector<double> q;
  std::vector<std::complex<double>> psi;

  /// Trapezoid approximation of the integral of |psi|^2.
  double norm() const;
};

/// Impulsive kick -gamma Theta(q) delta(t): the packet acquires the phase gamma Theta(q)/hbar.
struct ImprintConfig {
  double gamma = 0.0;
  std::function<double(double)> profile;

  /// Profile reproducing a library phase: Theta(q) = (hbar/gamma) theta((q - q0)/sigma).
  static ImprintConfig from_phase(const PhaseSpec& spec, const PacketParams& params, double gamma);
  /// Profile given by samples, linearly interpolated and held constant outside the range.
  static ImprintConfig from_samples(std::vector<double> q, std::vector<double> theta, double gamma);
};

/// Exact solution of the kicked evolution: psi(q) exp(i gamma Theta(q)/hbar), pointwise.
SampledWavefunction imprint(const SampledWavefunction& psi_in, const ImprintConfig& config,
                            double hbar);

/// The packet sigma^{-1/2} envelope((q - q0)/sigma) exp(i k q) sampled at the given points.
SampledWavefunction sample_packet(const PacketParams& params, const PhaseSpec& spec,
                                  std::span<const double> q);

/// Uniform grid on q0 +/- half_width_in_sigma * sigma.
std::vector<double> packet_grid(const PacketParams& params, double half_width_in_sigma = 12.0,
                                int points = 4001);

/// Dimensionless envelope of the kicked bare packet, for corrections::exact_toa.
/// The kick phase is evaluated in double precision.
corrections::Envelope imprinted_envelope(const PacketParams& params, const ImprintConfig& config);

/// Arrival-time expectation value of the kicked bare packet on |x| <= half_width,
/// with the quadrature floor set to the double-precision kick phase.
corrections::ExactToa imprinted_exact_toa(const PacketParams& params, const ImprintConfig& config,
                                          double half_width,
                                          corrections::ExactToaOptions options = {});

}  // namespace qtoa::imprint
