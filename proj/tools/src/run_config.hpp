#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qtoa/wavepacket.hpp"

namespace qtoa::cli {

/// SI inputs: sigma and q0 in metres, E0 in electronvolts, mu in kilograms, hbar in J s.
/// Times come out in seconds. Natural inputs are used as given.
namespace si {
inline constexpr double electronvolt = 1.602176634e-19;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double neutron_mass = 1.67492749804e-27;
}  // namespace si

enum class PhaseKind { none, double_root, terms, solve };

struct PhaseConfig {
  PhaseKind kind = PhaseKind::none;
  std::vector<wavepacket::PhaseTerm> terms;       // kind == terms
  std::vector<wavepacket::PhaseBasisTerm> basis;  // kind == solve
  int order = 2;                                  // kind == solve
};

struct SweepConfig {
  std::string variable = "k_sigma";  // k_sigma | E0
  double min = 12.1;
  double max = 121.0;
  int points = 11;
  std::string scale = "log";  // linear | log
};

struct RunConfig {
  wavepacket::UnitSystem units = wavepacket::UnitSystem::natural;
  double sigma = 6.0;
  double q0 = -10.0;
  double E0 = 200.0;
  double mu = 1.0;
  double hbar = 1.0;
  /// When set these replace E0 (through k = K/sigma) and q0 (= u sigma).
  std::optional<double> k_sigma;
  std::optional<double> q0_over_sigma;
  PhaseConfig phase;
  SweepConfig sweep;
  std::string out_path;  // empty: stdout
  std::string format;    // empty: the command's default
  std::optional<double> tol;

  /// Library parameters with E0 converted to joules under SI units.
  wavepacket::PacketParams packet() const;
  /// Packet for an explicit E0 in input units (used by energy sweeps).
  wavepacket::PacketParams packet_with_energy(double E0_input) const;
  /// Builds the phase for the packet; kind == solve runs the general solver and
  /// throws InvalidPhase when it finds no solution.
  wavepacket::PhaseSpec phase_spec(const wavepacket::PacketParams& p) const;
  /// Throws InvalidParameter on inconsistent settings.
  void validate() const;
};

/// Applies a JSON object mirroring RunConfig on top of `cfg`.
void apply_json(RunConfig& cfg, const nlohmann::json& j);

/// "odd:0:1:0.25,even:0:1:-0.1" -> phase terms.
std::vector<wavepacket::PhaseTerm> parse_terms(const std::string& text);
/// "odd:0:1,even:0:1" -> basis list.
std::vector<wavepacket::PhaseBasisTerm> parse_basis(const std::string& text);
PhaseKind parse_phase_kind(const std::string& text);
wavepacket::UnitSystem parse_units(const std::string& text);

}  // namespace qtoa::cli
