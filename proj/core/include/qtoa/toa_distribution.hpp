#pragma once

#include <complex>
#include <span>
#include <vector>

#include "qtoa/wavepacket.hpp"

namespace qtoa::toa_distribution {

using wavepacket::PacketParams;
using wavepacket::PhaseSpec;

enum class OverlapKind { non_nodal, nodal };

/// Arrival-time density at arrival point X, split into the contributions of the
/// non-nodal and nodal eigenfunction families. Densities are per unit time.
struct ToaDistribution {
  double arrival_point = 0.0;
  std::vector<double> tau;
  std::vector<double> pi_non;
  std::vector<double> pi_nod;
  std::vector<double> pi_total;
  /// Trapezoid integral of pi_total over the grid.
  double grid_mass = 0.0;
};

/// Amplitude of the packet on the time eigenfunction of the given kind:
/// integral of sqrt(|p|/2mu) (2 pi hbar)^{-1/2} [sgn p] exp(i p X/hbar - i p^2 tau/(2 mu hbar))
/// times the momentum amplitude, over the momentum support of the packet.
std::complex<double> overlap(const PacketParams& params, const PhaseSpec& spec, double X,
                             double tau, OverlapKind kind);

/// Density on a strictly increasing grid.
ToaDistribution distribution(const PacketParams& params, const PhaseSpec& spec, double X,
                             std::span<const double> tau_grid);

/// 2001 uniform points on (tau_class(X) -/+ half_width_factor * s), with
/// s = sqrt((sigma/v0)^2 + (tau_class/(2 k sigma))^2) combining the spreads from
/// the packet width and from the momentum width.
std::vector<double> default_tau_grid(const PacketParams& params, double X = 0.0,
                                     double half_width_factor = 5.0, int points = 2001);

/// Density on the default grid, redone once on a half-width factor of 10 if the grid
/// mass is below 0.999.
ToaDistribution auto_distribution(const PacketParams& params, const PhaseSpec& spec,
                                  double X = 0.0);

/// Distance between the outermost crossings of half the global maximum,
/// linearly interpolated. Throws GridTooNarrow when the maximum is on the grid
/// boundary or a side has no crossing.
double fwhm(std::span<const double> tau, std::span<const double> density);
double fwhm(const ToaDistribution& dist);

/// Trapezoid estimate of the mean arrival time, normalised by the grid mass.
double first_moment(const ToaDistribution& dist);

/// FWHM divided by the exact expectation value of the arrival time at X.
/// Throws DegenerateInput when that expectation value is not positive.
double fluctuation_ratio(const PacketParams& params, const PhaseSpec& spec, double X,
                         std::span<const double> tau_grid);

}  // namespace qtoa::toa_distribution
