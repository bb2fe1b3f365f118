#include "run_config.hpp"

#include <cmath>
#include <sstream>

#include "qtoa/errors.hpp"
#include "qtoa/phase_solver.hpp"

namespace qtoa::cli {

using wavepacket::Parity;
using wavepacket::PhaseBasisTerm;
using wavepacket::PhaseSpec;
using wavepacket::UnitSystem;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

Parity parse_parity(const std::string& s) {
  if (s == "odd") return Parity::odd;
  if (s == "even") return Parity::even;
  throw InvalidParameter("parity must be 'odd' or 'even', got '" + s + "'");
}

int parse_index(const std::string& s) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw InvalidParameter("bad basis index '" + s + "'");
  return v;
}

double parse_real(const std::string& s) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw InvalidParameter("bad number '" + s + "'");
  return v;
}

PhaseBasisTerm basis_from_json(const nlohmann::json& j) {
  PhaseBasisTerm t{parse_parity(j.at("parity").get<std::string>()), j.at("l").get<int>(),
                   j.at("m").get<int>()};
  t.validate();
  return t;
}

}  // namespace

wavepacket::PacketParams RunConfig::packet() const {
  if (!k_sigma) return packet_with_energy(E0);
  auto p = packet_with_energy(1.0);
  const double k = *k_sigma / p.sigma;
  p.E0 = k * k * p.hbar * p.hbar / (2.0 * p.mu);
  p.validate();
  return p;
}

wavepacket::PacketParams RunConfig::packet_with_energy(double E0_input) const {
  wavepacket::PacketParams p;
  p.units = units;
  p.sigma = sigma;
  p.q0 = q0_over_sigma ? *q0_over_sigma * sigma : q0;
  p.mu = mu;
  p.hbar = hbar;
  p.E0 = units == UnitSystem::SI ? E0_input * si::electronvolt : E0_input;
  p.validate();
  return p;
}

PhaseSpec RunConfig::phase_spec(const wavepacket::PacketParams& p) const {
  switch (phase.kind) {
    case PhaseKind::none:
      return {};
    case PhaseKind::double_root:
      return phase_solver::double_root_phase(p.q0_over_sigma());
    case PhaseKind::terms:
      return PhaseSpec(phase.terms);
    case PhaseKind::solve: {
      phase_solver::GeneralSolveOptions opt;
      if (tol) opt.tolerance = *tol;
      const auto r = phase_solver::solve_phase_general(phase.order, phase.basis, p.q0_over_sigma(), opt);
      if (!r.feasible) throw InvalidPhase("no phase in the given basis cancels the requested orders");
      return r.phase;
    }
  }
  return {};
}

void RunConfig::validate() const {
  if (phase.kind == PhaseKind::terms && phase.terms.empty())
    throw InvalidParameter("phase 'terms' needs --terms");
  if (phase.kind == PhaseKind::solve && phase.basis.empty())
    throw InvalidParameter("phase 'solve' needs --basis");
  if (tol && !(*tol > 0.0)) throw InvalidParameter("--tol must be positive");
  if (!format.empty() && format != "csv" && format != "json")
    throw InvalidParameter("--format must be csv or json");
  if (sweep.points < 1) throw InvalidParameter("sweep needs at least one point");
  if (sweep.scale != "linear" && sweep.scale != "log")
    throw InvalidParameter("sweep scale must be linear or log");
  if (sweep.variable != "k_sigma" && sweep.variable != "E0")
    throw InvalidParameter("sweep variable must be k_sigma or E0");
  if (!(sweep.min > 0.0) || !(sweep.max >= sweep.min))
    throw InvalidParameter("sweep needs 0 < min <= max");
  if (k_sigma && !(*k_sigma > 0.0)) throw InvalidParameter("--k-sigma must be positive");
  packet_with_energy(E0);
}

PhaseKind parse_phase_kind(const std::string& text) {
  if (text == "none") return PhaseKind::none;
  if (text == "double-root") return PhaseKind::double_root;
  if (text == "terms") return PhaseKind::terms;
  if (text == "solve") return PhaseKind::solve;
  throw InvalidParameter("phase must be none, double-root, terms or solve");
}

UnitSystem parse_units(const std::string& text) {
  if (text == "natural") return UnitSystem::natural;
  if (text == "SI" || text == "si") return UnitSystem::SI;
  throw InvalidParameter("units must be SI or natural");
}

std::vector<wavepacket::PhaseTerm> parse_terms(const std::string& text) {
  std::vector<wavepacket::PhaseTerm> out;
  for (const auto& item : split(text, ',')) {
    const auto f = split(item, ':');
    if (f.size() != 4) throw InvalidParameter("phase term must read parity:l:m:coefficient");
    PhaseBasisTerm t{parse_parity(f[0]), parse_index(f[1]), parse_index(f[2])};
    t.validate();
    out.push_back({parse_real(f[3]), t});
  }
  if (out.empty()) throw InvalidParameter("empty phase term list");
  return out;
}

std::vector<PhaseBasisTerm> parse_basis(const std::string& text) {
  std::vector<PhaseBasisTerm> out;
  for (const auto& item : split(text, ',')) {
    const auto f = split(item, ':');
    if (f.size() != 3) throw InvalidParameter("basis term must read parity:l:m");
    PhaseBasisTerm t{parse_parity(f[0]), parse_index(f[1]), parse_index(f[2])};
    t.validate();
    out.push_back(t);
  }
  if (out.empty()) throw InvalidParameter("empty basis");
  return out;
}

void apply_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidParameter("config must be a JSON object");
  try {
    if (j.contains("units")) cfg.units = parse_units(j["units"].get<std::string>());
    if (j.contains("sigma")) cfg.sigma = j["sigma"].get<double>();
    if (j.contains("q0")) cfg.q0 = j["q0"].get<double>();
    if (j.contains("E0")) cfg.E0 = j["E0"].get<double>();
    if (j.contains("mu")) cfg.mu = j["mu"].get<double>();
    if (j.contains("hbar")) cfg.hbar = j["hbar"].get<double>();
    if (j.contains("k_sigma")) cfg.k_sigma = j["k_sigma"].get<double>();
    if (j.contains("q0_over_sigma")) cfg.q0_over_sigma = j["q0_over_sigma"].get<double>();
    if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
    if (j.contains("phase")) {
      const auto& ph = j["phase"];
      cfg.phase.kind = parse_phase_kind(ph.at("kind").get<std::string>());
      if (ph.contains("terms")) {
        cfg.phase.terms.clear();
        for (const auto& t : ph["terms"])
          cfg.phase.terms.push_back({t.at("coefficient").get<double>(), basis_from_json(t)});
      }
      if (ph.contains("basis")) {
        cfg.phase.basis.clear();
        for (const auto& t : ph["basis"]) cfg.phase.basis.push_back(basis_from_json(t));
      }
      if (ph.contains("order")) cfg.phase.order = ph["order"].get<int>();
    }
    if (j.contains("sweep")) {
      const auto& s = j["sweep"];
      if (s.contains("variable")) cfg.sweep.variable = s["variable"].get<std::string>();
      if (s.contains("min")) cfg.sweep.min = s["min"].get<double>();
      if (s.contains("max")) cfg.sweep.max = s["max"].get<double>();
      if (s.contains("points")) cfg.sweep.points = s["points"].get<int>();
      if (s.contains("scale")) cfg.sweep.scale = s["scale"].get<std::string>();
    }
    if (j.contains("output")) {
      const auto& o = j["output"];
      if (o.contains("path")) cfg.out_path = o["path"].get<std::string>();
      if (o.contains("format")) cfg.format = o["format"].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("config: ") + e.what());
  }
}

}  // namespace qtoa::cli
