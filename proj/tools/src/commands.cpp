#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

#include "acceptance_suite.hpp"
#include "output.hpp"
#include "qtoa/qtoa.hpp"

namespace qtoa::cli {

using nlohmann::json;
using wavepacket::PacketParams;
using wavepacket::PhaseSpec;

namespace {

bool wants_json(const RunConfig& cfg, const char* fallback) {
  return (cfg.format.empty() ? std::string(fallback) : cfg.format) == "json";
}

void emit_json(const RunConfig& cfg, const json& j) { write_text(cfg.out_path, j.dump(2) + "\n"); }

// Runs body(i) for i in [0, n) on a few threads; the first exception is rethrown.
void parallel_for(int n, const std::function<void(int)>& body) {
  const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, 8);
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto run = [&] {
    for (int i = next++; i < n && !failed; i = next++) {
      try {
        body(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < std::min(workers, n); ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<double> sweep_values(const SweepConfig& s) {
  std::vector<double> v(s.points);
  for (int i = 0; i < s.points; ++i) {
    const double f = s.points == 1 ? 0.0 : static_cast<double>(i) / (s.points - 1);
    v[i] = s.scale == "log" ? s.min * std::pow(s.max / s.min, f) : s.min + (s.max - s.min) * f;
  }
  return v;
}

corrections::ExactToaOptions exact_options(const RunConfig& cfg) {
  corrections::ExactToaOptions opt;
  if (cfg.tol) opt.inner_tol = static_cast<long double>(*cfg.tol);
  return opt;
}

json phase_terms_json(const PhaseSpec& spec) {
  json arr = json::array();
  for (const auto& t : spec.terms())
    arr.push_back({{"parity", t.basis.parity == wavepacket::Parity::odd ? "odd" : "even"},
                   {"l", t.basis.l},
                   {"m", t.basis.m},
                   {"coefficient", t.coefficient}});
  return arr;
}

}  // namespace

int cmd_solve_phase(const RunConfig& cfg, const SolvePhaseArgs& args) {
  const PacketParams p = cfg.packet_with_energy(cfg.E0);
  const double u = p.q0_over_sigma();
  if (cfg.phase.kind == PhaseKind::solve) {
    phase_solver::GeneralSolveOptions opt;
    if (cfg.tol) opt.tolerance = *cfg.tol;
    const auto r = phase_solver::solve_phase_general(cfg.phase.order, cfg.phase.basis, u, opt);
    json j = {{"method", "general"},
              {"order", cfg.phase.order},
              {"q0_over_sigma", u},
              {"feasible", r.feasible},
              {"coefficients", r.coefficients},
              {"residuals", r.residuals},
              {"starts", r.starts},
              {"converged_starts", r.converged_starts}};
    emit_json(cfg, j);
    return r.feasible ? kSuccess : kInfeasible;
  }
  if (!args.b) throw InvalidParameter("solve-phase needs --b (or --phase solve with --basis)");
  phase_solver::SolveMethod method;
  if (args.method == "closed-form")
    method = phase_solver::SolveMethod::closed_form;
  else if (args.method == "numeric")
    method = phase_solver::SolveMethod::numeric;
  else
    throw InvalidParameter("--method must be closed-form or numeric");
  const auto r = phase_solver::solve_a_from_b(*args.b, p.sigma, p.q0, method);
  json j = {{"method", args.method == "numeric" ? "numeric" : "closed_form"},
            {"b", *args.b},
            {"q0_over_sigma", u},
            {"a", json_number(r.preferred_a())},
            {"a_plus", json_number(r.a_plus)},
            {"a_minus", json_number(r.a_minus)},
            {"discriminant", r.discriminant},
            {"feasible", r.feasible},
            {"residual_cond1", r.residual_cond1},
            {"residual_cond2", r.residual_cond2},
            {"residual_cond3", r.residual_cond3}};
  emit_json(cfg, j);
  return r.feasible ? kSuccess : kInfeasible;
}

int cmd_qfactor(const RunConfig& cfg) {
  const auto values = sweep_values(cfg.sweep);
  const PacketParams base = cfg.packet();
  const bool phased = cfg.phase.kind != PhaseKind::none;
  const PhaseSpec spec = cfg.phase_spec(base);
  const double cancel_tol = cfg.tol.value_or(1e-8);

  const int n = static_cast<int>(values.size());
  std::vector<std::vector<std::optional<double>>> rows(n);
  parallel_for(n, [&](int i) {
    PacketParams p;
    if (cfg.sweep.variable == "E0") {
      p = cfg.packet_with_energy(values[i]);
    } else {
      RunConfig c = cfg;
      c.k_sigma = values[i];
      p = c.packet();
    }
    std::optional<double> qw;
    if (phased) qw = corrections::q_wp(p, spec, cancel_tol);
    rows[i] = {p.k_sigma(), corrections::q_np(p), qw};
  });

  if (wants_json(cfg, "csv")) {
    json j = {{"k_sigma", json::array()}, {"q_np", json::array()}, {"q_wp", json::array()}};
    for (const auto& r : rows) {
      j["k_sigma"].push_back(*r[0]);
      j["q_np"].push_back(*r[1]);
      j["q_wp"].push_back(json_number(r[2]));
    }
    emit_json(cfg, j);
  } else {
    write_text(cfg.out_path, to_csv({"k_sigma", "q_np", "q_wp"}, rows));
  }
  return kSuccess;
}

int cmd_toa(const RunConfig& cfg, const ToaArgs& args) {
  if (args.method != "exact" && args.method != "asymptotic" && args.method != "both")
    throw InvalidParameter("--method must be exact, asymptotic or both");
  const PacketParams p = cfg.packet();
  const PhaseSpec spec = cfg.phase_spec(p);
  json j = {{"method", args.method}, {"k_sigma", p.k_sigma()}, {"q0_over_sigma", p.q0_over_sigma()}};

  std::optional<corrections::ExactToa> ex;
  std::optional<corrections::AsymptoticToa> as;
  if (args.method != "asymptotic") ex = corrections::exact_toa(p, spec, exact_options(cfg));
  if (args.method != "exact") {
    corrections::AsymptoticOptions opt;
    opt.max_order = args.max_order;
    try {
      as = corrections::asymptotic_toa(p, spec, opt);
    } catch (const NumericalFailure& e) {
      throw NumericalFailure(std::string(e.what()) + "; use --method exact for this packet",
                             e.best_estimate(), e.error_estimate());
    }
  }
  const double tau_class = ex ? ex->tau_class : as->tau_class;
  j["tau_class"] = tau_class;
  if (ex && !as) {
    j["value"] = ex->value;
    j["ratio"] = ex->ratio();
    j["error_estimate"] = ex->error_estimate;
    j["imag_part"] = ex->imag_part;
  } else if (as && !ex) {
    j["value"] = as->value;
    j["ratio"] = as->ratio();
    j["error_estimate"] = as->error_estimate;
    j["truncation_order"] = as->series.truncation_index;
  } else {
    j["value"] = ex->value;
    j["ratio"] = ex->ratio();
    j["error_estimate"] = ex->error_estimate;
    j["imag_part"] = ex->imag_part;
    j["asymptotic_value"] = as->value;
    j["asymptotic_ratio"] = as->ratio();
    j["asymptotic_error_estimate"] = as->error_estimate;
    j["truncation_order"] = as->series.truncation_index;
    j["discrepancy"] = std::abs(ex->value - as->value);
  }
  emit_json(cfg, j);
  return kSuccess;
}

int cmd_dist(const RunConfig& cfg, const DistArgs& args) {
  const PacketParams p = cfg.packet();
  const PhaseSpec spec = cfg.phase_spec(p);
  const double X = args.arrival_point;
  toa_distribution::ToaDistribution d;
  std::vector<double> grid;
  if (args.grid_factor || args.points) {
    const int points = args.points.value_or(2001);
    if (points < 3) throw InvalidParameter("--points must be at least 3");
    const double factor = args.grid_factor.value_or(5.0);
    if (!(factor > 0.0)) throw InvalidParameter("--grid-factor must be positive");
    grid = toa_distribution::default_tau_grid(p, X, factor, points);
    d = toa_distribution::distribution(p, spec, X, grid);
  } else {
    d = toa_distribution::auto_distribution(p, spec, X);
    grid = d.tau;
  }

  json summary;
  if (args.fwhm) {
    double width = 0.0;
    try {
      width = toa_distribution::fwhm(d);
    } catch (const GridTooNarrow& e) {
      throw GridTooNarrow(std::string(e.what()) + " (raise --grid-factor)");
    }
    summary = {{"fwhm", width},
               {"first_moment", toa_distribution::first_moment(d)},
               {"grid_mass", d.grid_mass},
               {"fluctuation_ratio", toa_distribution::fluctuation_ratio(p, spec, X, grid)},
               {"tau_class", p.classical_toa()},
               {"k_sigma", p.k_sigma()}};
  }

  if (wants_json(cfg, "csv")) {
    json j = {{"tau", d.tau}, {"pi_non", d.pi_non}, {"pi_nod", d.pi_nod}, {"pi_total", d.pi_total}};
    if (args.fwhm) j["summary"] = summary;
    emit_json(cfg, j);
    return kSuccess;
  }
  std::vector<std::vector<std::optional<double>>> rows(d.tau.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    rows[i] = {d.tau[i], d.pi_non[i], d.pi_nod[i], d.pi_total[i]};
  write_text(cfg.out_path, to_csv({"tau", "pi_non", "pi_nod", "pi_total"}, rows));
  if (args.fwhm) {
    const std::string path = !args.sidecar.empty()   ? args.sidecar
                             : !cfg.out_path.empty() ? cfg.out_path + ".json"
                                                     : std::string();
    const std::string text = summary.dump(2) + "\n";
    if (path.empty())
      std::fputs(text.c_str(), stderr);
    else
      write_text(path, text);
  }
  return kSuccess;
}

int cmd_imprint_demo(const RunConfig& cfg, const ImprintArgs& args) {
  const PacketParams p = cfg.packet();
  const PhaseSpec spec = cfg.phase.kind == PhaseKind::none
                             ? phase_solver::double_root_phase(p.q0_over_sigma())
                             : cfg.phase_spec(p);
  const auto grid = imprint::packet_grid(p);
  const auto bare = imprint::sample_packet(p, PhaseSpec{}, grid);
  const auto config = imprint::ImprintConfig::from_phase(spec, p, args.gamma);
  const auto kicked = imprint::imprint(bare, config, p.hbar);
  const auto direct = imprint::sample_packet(p, spec, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    worst = std::max(worst, std::abs(kicked.psi[i] - direct.psi[i]));
  const double L = wavepacket::truncation_half_width(spec, p.q0_over_sigma());
  const auto t_kick =
      imprint::imprinted_exact_toa(p, config, L, exact_options(cfg));
  const auto t_direct = corrections::exact_toa(p, spec, exact_options(cfg));
  json j = {{"gamma", args.gamma},
            {"phase", phase_terms_json(spec)},
            {"max_pointwise_difference", worst},
            {"norm_in", bare.norm()},
            {"norm_out", kicked.norm()},
            {"toa_kicked", t_kick.value},
            {"toa_direct", t_direct.value},
            {"toa_difference", std::abs(t_kick.value - t_direct.value)},
            {"toa_tolerance", t_kick.error_estimate + t_direct.error_estimate},
            {"tau_class", p.classical_toa()}};
  emit_json(cfg, j);
  return kSuccess;
}

int cmd_verify(const RunConfig& cfg) {
  std::FILE* f = stdout;
  if (!cfg.out_path.empty()) {
    f = std::fopen(cfg.out_path.c_str(), "w");
    if (!f) throw InvalidParameter("cannot open output file '" + cfg.out_path + "'");
  }
  const int failures = run_acceptance_suite(f);
  if (f != stdout) std::fclose(f);
  return failures == 0 ? kSuccess : kNumericalFailure;
}

}  // namespace qtoa::cli
