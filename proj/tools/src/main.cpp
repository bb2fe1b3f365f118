#include <cstdio>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "json.hpp"
#include "qtoa/errors.hpp"
#include "run_config.hpp"

using namespace qtoa::cli;

namespace {

// Flags that override the config file when given.
struct Overrides {
  std::optional<std::string> units, out, format, phase, terms, basis;
  std::optional<double> tol, sigma, q0, E0, mu, hbar, k_sigma, q0_over_sigma;
  std::optional<int> order;
  std::optional<std::string> sweep_var, scale;
  std::optional<double> sweep_min, sweep_max;
  std::optional<int> sweep_points;
};

RunConfig defaults_for(qtoa::wavepacket::UnitSystem units) {
  RunConfig c;
  c.units = units;
  if (units == qtoa::wavepacket::UnitSystem::SI) {
    c.sigma = 1.1e-10;
    c.q0 = -5.0 / 3.0 * 1.1e-10;
    c.E0 = 0.025;
    c.mu = si::neutron_mass;
    c.hbar = si::hbar;
    c.sweep.variable = "E0";
    c.sweep.min = 0.025;
    c.sweep.max = 2.5;
  }
  return c;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw qtoa::InvalidParameter("cannot read config file '" + path + "'");
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw qtoa::InvalidParameter("config file '" + path + "': " + e.what());
  }
}

RunConfig build_config(const std::string& config_path, const Overrides& o) {
  nlohmann::json file;
  if (!config_path.empty()) file = load_json(config_path);
  auto units = qtoa::wavepacket::UnitSystem::natural;
  if (file.is_object() && file.contains("units")) units = parse_units(file["units"].get<std::string>());
  if (o.units) units = parse_units(*o.units);

  RunConfig c = defaults_for(units);
  if (!config_path.empty()) apply_json(c, file);
  c.units = units;
  if (o.out) c.out_path = *o.out;
  if (o.format) c.format = *o.format;
  if (o.tol) c.tol = *o.tol;
  if (o.sigma) c.sigma = *o.sigma;
  if (o.q0) c.q0 = *o.q0;
  if (o.E0) c.E0 = *o.E0;
  if (o.mu) c.mu = *o.mu;
  if (o.hbar) c.hbar = *o.hbar;
  if (o.k_sigma) c.k_sigma = *o.k_sigma;
  if (o.q0_over_sigma) c.q0_over_sigma = *o.q0_over_sigma;
  if (o.E0 && o.k_sigma) throw qtoa::InvalidParameter("give either --E0 or --k-sigma, not both");
  if (o.q0 && o.q0_over_sigma)
    throw qtoa::InvalidParameter("give either --q0 or --q0-over-sigma, not both");
  if (o.phase) c.phase.kind = parse_phase_kind(*o.phase);
  if (o.terms) {
    c.phase.terms = parse_terms(*o.terms);
    if (!o.phase) c.phase.kind = PhaseKind::terms;
  }
  if (o.basis) {
    c.phase.basis = parse_basis(*o.basis);
    if (!o.phase) c.phase.kind = PhaseKind::solve;
  }
  if (o.order) c.phase.order = *o.order;
  if (o.sweep_var) c.sweep.variable = *o.sweep_var;
  if (o.sweep_min) c.sweep.min = *o.sweep_min;
  if (o.sweep_max) c.sweep.max = *o.sweep_max;
  if (o.sweep_points) c.sweep.points = *o.sweep_points;
  if (o.scale) c.sweep.scale = *o.scale;
  c.validate();
  return c;
}

int fail(int code, const std::string& what) {
  std::fprintf(stderr, "error: %s\n", what.c_str());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arrival-time expectation values, corrections and distributions of Gaussian packets"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  std::string config_path;
  app.add_option("--units", o.units, "Unit system: natural (default) or SI");
  app.add_option("--config", config_path, "JSON run configuration; explicit flags override it");
  app.add_option("--out", o.out, "Output path (default stdout)");
  app.add_option("--format", o.format, "csv or json");
  app.add_option("--tol", o.tol, "Tolerance for exact integrals, solvers and cancellation checks");
  app.add_option("--sigma", o.sigma, "Packet width");
  app.add_option("--q0", o.q0, "Initial centre (negative: left of the arrival point)");
  app.add_option("--E0", o.E0, "Kinetic energy (eV under SI units)");
  app.add_option("--mu", o.mu, "Mass");
  app.add_option("--hbar", o.hbar, "Reduced Planck constant");
  app.add_option("--k-sigma", o.k_sigma, "Dimensionless wavenumber; replaces --E0");
  app.add_option("--q0-over-sigma", o.q0_over_sigma, "Dimensionless centre; replaces --q0");
  app.add_option("--phase", o.phase, "none, double-root, terms or solve");
  app.add_option("--terms", o.terms, "Phase terms parity:l:m:coefficient, comma separated");
  app.add_option("--basis", o.basis, "Basis for --phase solve: parity:l:m, comma separated");
  app.add_option("--order", o.order, "Highest correction order cancelled by --phase solve (1-3)");

  SolvePhaseArgs solve_args;
  auto* solve = app.add_subcommand("solve-phase", "Odd coefficient that cancels the second-order correction");
  solve->add_option("--b", solve_args.b, "Even coefficient (dimensionless)");
  solve->add_option("--method", solve_args.method, "closed-form or numeric");

  auto* qfactor = app.add_subcommand("qfactor", "Leading correction factors over a sweep (CSV)");
  qfactor->add_option("--sweep-var", o.sweep_var, "k_sigma or E0");
  qfactor->add_option("--min", o.sweep_min, "Sweep start");
  qfactor->add_option("--max", o.sweep_max, "Sweep end");
  qfactor->add_option("--points", o.sweep_points, "Number of sweep points");
  qfactor->add_option("--scale", o.scale, "linear or log");

  ToaArgs toa_args;
  auto* toa = app.add_subcommand("toa", "Arrival-time expectation value (JSON)");
  toa->add_option("--method", toa_args.method, "exact, asymptotic or both");
  toa->add_option("--max-order", toa_args.max_order, "Highest series order scanned");

  DistArgs dist_args;
  auto* dist = app.add_subcommand("dist", "Arrival-time distribution (CSV)");
  dist->add_option("--X", dist_args.arrival_point, "Arrival point");
  dist->add_option("--grid-factor", dist_args.grid_factor, "Grid half-width in spread units");
  dist->add_option("--points", dist_args.points, "Number of time points");
  dist->add_flag("--fwhm", dist_args.fwhm, "Write a JSON summary with FWHM, moment and mass");
  dist->add_option("--sidecar", dist_args.sidecar, "Path of the JSON summary");

  ImprintArgs imprint_args;
  auto* demo = app.add_subcommand("imprint-demo", "Phase imprinting by an impulsive kick (JSON)");
  demo->add_option("--gamma", imprint_args.gamma, "Coupling strength");

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite and print a report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kInvalid, e.what());
  }

  try {
    const RunConfig cfg = build_config(config_path, o);
    if (solve->parsed()) return cmd_solve_phase(cfg, solve_args);
    if (qfactor->parsed()) return cmd_qfactor(cfg);
    if (toa->parsed()) return cmd_toa(cfg, toa_args);
    if (dist->parsed()) return cmd_dist(cfg, dist_args);
    if (demo->parsed()) return cmd_imprint_demo(cfg, imprint_args);
    if (verify->parsed()) return cmd_verify(cfg);
  } catch (const qtoa::NumericalFailure& e) {
    return fail(kNumericalFailure, e.what());
  } catch (const qtoa::Overflow& e) {
    return fail(kNumericalFailure, e.what());
  } catch (const qtoa::Error& e) {
    return fail(kInvalid, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(kInvalid, e.what());
  }
  return kInvalid;
}
