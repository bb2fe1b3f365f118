#include "acceptance_suite.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "qtoa/qtoa.hpp"

namespace {

using namespace qtoa;
using wavepacket::PacketParams;
using wavepacket::Parity;
using wavepacket::PhaseBasisTerm;
using wavepacket::PhaseSpec;

constexpr double kPi = 3.14159265358979323846;

int failures = 0;
std::FILE* sink = stdout;

void detail(const char* fmt, double a = 0, double b = 0, double c = 0, double d = 0) {
  std::fprintf(sink, "    ");
  std::fprintf(sink, fmt, a, b, c, d);
  std::fprintf(sink, "\n");
}

void verdict(int id, const char* title, bool ok) {
  std::fprintf(sink, "[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, title);
  if (!ok) ++failures;
  std::fflush(sink);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Pair {
  double a, b, u, sigma, q0;
};
Pair thermal() {
  const double u = -0.9 * std::sqrt(3.0);
  return {5.0 / (4.0 * std::sqrt(19.0 * kPi)), 9.0 / (16.0 * std::sqrt(19.0 * kPi)), u, 1.0, u};
}
Pair neutron() {
  return {9.0 / (8.0 * std::sqrt(6.0 * kPi)), 5.0 / (16.0 * std::sqrt(2.0 * kPi)), -5.0 / 3.0, 6.0,
          -10.0};
}

PacketParams neutron_params(double E0 = 200.0) {
  PacketParams p;
  p.sigma = 6.0;
  p.q0 = -10.0;
  p.E0 = E0;
  return p;
}

PhaseSpec neutron_phase() {
  const auto c = neutron();
  return phase_solver::two_term_phase(c.a, c.b);
}

void exact_identities() {
  bool ok = true;
  for (const auto& c : {thermal(), neutron()}) {
    const double res = phase_solver::second_order_residual(c.a, c.b, c.u);
    const auto r = phase_solver::solve_a_from_b(c.b, c.sigma, c.q0);
    const bool good = std::abs(res) <= 1e-12 && r.feasible && std::abs(r.discriminant) <= 1e-12 &&
                      std::abs(*r.a_plus - c.a) <= 1e-12 && std::abs(*r.a_minus - c.a) <= 1e-12;
    ok = ok && good;
    detail("u = %.6f: residual %.2e, discriminant %.2e, |a - a_caption| = %.2e", c.u, res,
           r.discriminant, std::max(std::abs(*r.a_plus - c.a), std::abs(*r.a_minus - c.a)));
  }
  verdict(1, "second-order identity and double-root solve at both caption pairs (1e-12)", ok);
}

void condition_residuals() {
  double worst = 0.0;
  int count = 0;
  for (auto parity : {Parity::odd, Parity::even})
    for (int l = 0; l <= 3; ++l)
      for (int m = 0; m <= 3; ++m) {
        if (l == m) continue;
        const auto spec = phase_solver::build_parity_phase(parity, l, m, 1.0);
        for (double u : {-5.0 / 3.0, -0.9 * std::sqrt(3.0), -3.0}) {
          const auto r = phase_solver::condition_residuals_quadrature(spec, u);
          worst = std::max({worst, r.momentum, r.first_order});
          ++count;
        }
      }
  const auto fig = phase_solver::condition_residuals_quadrature(neutron_phase(), -5.0 / 3.0);
  detail("%.0f parity phases: worst momentum/first-order residual %.2e", count, worst);
  detail("caption phase: momentum %.2e, first order %.2e, second order %.2e", fig.momentum,
         fig.first_order, fig.second_order);
  const bool ok = worst < 1e-10 && fig.momentum < 1e-10 && fig.first_order < 1e-10 &&
                  fig.second_order < 1e-10;
  verdict(2, "cancellation-condition residuals by quadrature (1e-10)", ok);
}

void oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  const double u = -5.0 / 3.0;
  for (int phased = 0; phased < 2; ++phased) {
    const PhaseSpec spec = phased ? neutron_phase() : PhaseSpec{};
    for (double K : {10.0, 30.0, 120.0}) {
      const auto p = PacketParams::dimensionless(K, u);
      const auto ex = corrections::exact_toa(p, spec);
      const auto as = corrections::asymptotic_toa(p, spec);
      const double diff = std::abs(ex.value - as.value);
      const bool good = diff <= 3.0 * as.error_estimate;
      ok = ok && good;
      detail("%.0f K = %5.0f: |exact - series|/tau_class = %.3e, 3 x estimate = %.3e",
             phased ? 1.0 : 0.0, K, diff / as.tau_class, 3.0 * as.error_estimate / as.tau_class);
    }
  }
  const double elapsed = seconds_since(t0);
  detail("(first column: 0 = bare packet, 1 = caption phase) runtime %.1f s", elapsed);
  verdict(3, "exact expectation vs summed series within 3x error estimate, runtime < 60 s",
          ok && elapsed < 60.0);
}

void leading_law() {
  bool ok_np = true;
  const double u = -5.0 / 3.0;
  for (double K : {30.0, 60.0, 120.0}) {
    const auto r = corrections::exact_toa(PacketParams::dimensionless(K, u), PhaseSpec{});
    const double law = 1.0 / (4 * K * K);
    const double dev = std::abs((r.ratio() - 1.0) - law) / law;
    ok_np = ok_np && dev < 5.0 / (K * K);
    detail("bare K = %5.0f: ratio - 1 = %.6e, 1/(4K^2) = %.6e, rel. deviation %.2e", K,
           r.ratio() - 1.0, law, dev);
    detail("               bound 5/K^2 = %.2e", 5.0 / (K * K));
  }
  verdict(4, "(a) bare packet: ratio - 1 follows 1/(4K^2) within 5/K^2", ok_np);
  const auto p = neutron_params();
  const auto r = corrections::exact_toa(p, neutron_phase());
  const double K = p.k_sigma();
  const double dev = std::abs(r.ratio() - 1.0);
  detail("phased K = %.0f: |ratio - 1| = %.4e, bound 10/K^3 = %.4e, exact error %.1e", K, dev,
         10.0 / (K * K * K), r.error_estimate / r.tau_class);
  const auto as = corrections::asymptotic_toa(p, neutron_phase());
  for (const auto& t : as.series.terms)
    if (t.order >= 3 && t.order <= 5)
      detail("  series order %.0f contribution %.4e", t.order, t.value);
  verdict(4, "(b) caption phase: |ratio - 1| < 10 K^-3 at K = 120", dev < 10.0 / (K * K * K));
}

void qfactor_sweep() {
  const auto c = thermal();
  const auto spec = phase_solver::two_term_phase(c.a, c.b);
  auto sweep = [&](double k_lo, double k_hi, int n, bool report) {
    bool sign_np = true, sign_wp = true, smaller = true, mono = true;
    double prev_np = INFINITY, prev_wp = INFINITY;
    int crossover_rows = 0;
    for (int i = 0; i < n; ++i) {
      const double K = k_lo * std::pow(k_hi / k_lo, static_cast<double>(i) / (n - 1));
      const auto p = PacketParams::dimensionless(K, c.u);
      const double qn = corrections::q_np(p), qw = corrections::q_wp(p, spec);
      sign_np = sign_np && qn > 0;
      sign_wp = sign_wp && qw < 0;
      if (std::abs(qw) >= std::abs(qn)) {
        smaller = false;
        ++crossover_rows;
      }
      mono = mono && std::abs(qn) < prev_np && std::abs(qw) < prev_wp;
      prev_np = std::abs(qn);
      prev_wp = std::abs(qw);
      if (report && (i == 0 || i == n - 1))
        detail("K = %8.2f: q_np = %+.4e, q_wp = %+.4e", K, qn, qw);
    }
    detail("K in [%.1f, %.1f]: q_np > 0 %.0f, q_wp < 0 %.0f", k_lo, k_hi, sign_np, sign_wp);
    detail("    |q_wp| < |q_np| %.0f (%.0f rows violate), both decreasing %.0f", smaller, crossover_rows,
           mono);
    return sign_np && sign_wp && smaller && mono;
  };
  const bool ok = sweep(12.1, 121.0, 21, true);
  sweep(121.0, 1210.0, 21, true);
  // The sign the exact expectation value gives the phased correction.
  for (double K : {121.0, 1210.0}) {
    const auto p = PacketParams::dimensionless(K, c.u);
    const auto r = corrections::exact_toa(p, spec);
    detail("exact oracle K = %.0f: ratio - 1 = %+.4e (q_wp %+.4e, error %.1e)", K, r.ratio() - 1.0,
           corrections::q_wp(p, spec), r.error_estimate / r.tau_class);
  }
  detail("(1 = true, 0 = false)");
  verdict(5, "q_np > 0, q_wp < 0, |q_wp| < |q_np|, both -> 0 over K in [12.1, 121]", ok);
}

void distributions() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto p = neutron_params();
  const auto np = toa_distribution::auto_distribution(p, PhaseSpec{});
  const auto wp = toa_distribution::auto_distribution(p, neutron_phase());
  bool ok = true;
  for (const auto* d : {&np, &wp}) {
    const double mom = toa_distribution::first_moment(*d);
    const auto ex = corrections::exact_toa(p, d == &np ? PhaseSpec{} : neutron_phase());
    const double rel = std::abs(mom - ex.value) / ex.value;
    ok = ok && std::abs(d->grid_mass - 1.0) <= 1e-3 && rel <= 1e-3;
    detail("%.0f: grid mass %.8f, first moment %.8f vs exact %.8f", d == &wp ? 1.0 : 0.0,
           d->grid_mass, mom, ex.value);
    detail("    relative moment error %.2e", rel);
  }
  const double w_np = toa_distribution::fwhm(np), w_wp = toa_distribution::fwhm(wp);
  detail("FWHM bare %.6f, phased %.6f", w_np, w_wp);
  ok = ok && w_wp < w_np;
  double prev = INFINITY;
  for (double E0 : {100.0, 200.0, 400.0}) {
    const double w = toa_distribution::fwhm(
        toa_distribution::auto_distribution(neutron_params(E0), neutron_phase()));
    detail("E0 = %.0f: phased FWHM %.6f", E0, w);
    ok = ok && w < prev;
    prev = w;
  }
  const double elapsed = seconds_since(t0);
  detail("(0 = bare, 1 = phased) runtime %.1f s", elapsed);
  verdict(6, "distribution mass, first moment, phased narrower, FWHM falls with energy",
          ok && elapsed < 300.0);
}

PhaseSpec random_phase(std::mt19937& rng) {
  std::uniform_real_distribution<double> uc(-0.4, 0.4);
  std::uniform_int_distribution<int> ui(0, 2), up(0, 1), un(1, 3);
  std::vector<wavepacket::PhaseTerm> terms;
  const int n = un(rng);
  for (int k = 0; k < n; ++k) {
    int l = ui(rng), m = ui(rng);
    if (l == m) m = (m + 1) % 3;
    terms.push_back({uc(rng), {up(rng) ? Parity::odd : Parity::even, l, m}});
  }
  return PhaseSpec(terms);
}

void explicit_audit() {
  using corrections::ExplicitForm;
  std::mt19937 rng(20240607);
  std::vector<PhaseSpec> phases;
  for (int i = 0; i < 20; ++i) phases.push_back(random_phase(rng));
  auto mismatch = [&](ExplicitForm form, int order, int& bad) {
    double worst = 0.0;
    bad = 0;
    for (const auto& s : phases) {
      const auto g = corrections::chi_for_order(order, s);
      const auto e = corrections::chi_explicit(order, s, form);
      const double d = std::max(std::abs(e.base - g.base) / (1 + std::abs(g.base)),
                                std::abs(e.first_moment - g.first_moment) /
                                    (1 + std::abs(g.first_moment)));
      if (d >= 1e-8) ++bad;
      worst = std::max(worst, d);
    }
    return worst;
  };
  bool ok = true;
  for (int order = 1; order <= 6; ++order) {
    int bad_p = 0, bad_c = 0;
    const double wp = mismatch(ExplicitForm::printed, order, bad_p);
    const double wc = mismatch(ExplicitForm::complete, order, bad_c);
    if (order <= 5) ok = ok && bad_p == 0;
    detail("order %.0f: printed lists worst rel. mismatch %.2e (%2.0f/20 phases off)", order, wp,
           bad_p);
    detail("         complete expansion %.2e (%.0f/20 off)", wc, bad_c);
  }
  detail("order 6 is reported, not gated; discrepancies are reproducible with seed 20240607");
  verdict(7, "printed explicit correction formulas match generic definitions, orders 1-5 (1e-8)",
          ok);
}

void imprinting() {
  const auto p = neutron_params();
  const auto spec = neutron_phase();
  const auto grid = imprint::packet_grid(p);
  const auto bare = imprint::sample_packet(p, PhaseSpec{}, grid);
  const auto cfg = imprint::ImprintConfig::from_phase(spec, p, 1.0);
  const auto kicked = imprint::imprint(bare, cfg, p.hbar);
  const auto direct = imprint::sample_packet(p, spec, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    worst = std::max(worst, std::abs(kicked.psi[i] - direct.psi[i]));
  const double dnorm = std::abs(kicked.norm() - bare.norm());
  const double L = wavepacket::truncation_half_width(spec, p.q0_over_sigma());
  const auto t_kick = imprint::imprinted_exact_toa(p, cfg, L);
  const auto t_direct = corrections::exact_toa(p, spec);
  const double dt = std::abs(t_kick.value - t_direct.value);
  const double tol = t_kick.error_estimate + t_direct.error_estimate;
  detail("pointwise %.2e, norm change %.2e, arrival-time difference %.2e (tolerance %.2e)", worst,
         dnorm, dt, tol);
  verdict(8, "kicked bare packet equals phased packet; norm and arrival time preserved",
          worst < 1e-12 && dnorm < 1e-12 && dt <= tol);
}

// An exception inside a criterion counts as its failure.
void guarded(int id, const char* title, void (*check)()) {
  try {
    check();
  } catch (const std::exception& e) {
    std::fprintf(sink, "    exception: %s\n", e.what());
    verdict(id, title, false);
  }
}

}  // namespace

namespace qtoa::cli {

int run_acceptance_suite(std::FILE* out) {
  sink = out;
  failures = 0;
  const auto t0 = std::chrono::steady_clock::now();
  guarded(1, "exact identities", exact_identities);
  guarded(2, "phase conditions", condition_residuals);
  guarded(3, "oracle equivalence", oracle_equivalence);
  guarded(4, "leading correction law", leading_law);
  guarded(5, "quality factor sweep", qfactor_sweep);
  guarded(6, "arrival-time distributions", distributions);
  guarded(7, "explicit correction forms", explicit_audit);
  guarded(8, "phase imprinting", imprinting);
  std::fprintf(sink, "%d failing check(s), total %.1f s\n", failures, seconds_since(t0));
  return failures;
}

}  // namespace qtoa::cli
