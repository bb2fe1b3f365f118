#include <benchmark/benchmark.h>

#include <cmath>

#include "qtoa/qtoa.hpp"

namespace {

using qtoa::wavepacket::PacketParams;
using qtoa::wavepacket::PhaseSpec;

PacketParams packet() {
  PacketParams p;
  p.sigma = 6.0;
  p.q0 = -10.0;
  p.E0 = 200.0;
  return p;
}

void BM_ChiGeneral(benchmark::State& state) {
  const auto spec = qtoa::phase_solver::double_root_phase(-5.0 / 3.0);
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qtoa::corrections::chi_for_order(order, spec));
}
BENCHMARK(BM_ChiGeneral)->DenseRange(2, 8, 2);

void BM_AsymptoticToa(benchmark::State& state) {
  const auto p = packet();
  const auto spec = qtoa::phase_solver::double_root_phase(p.q0_over_sigma());
  for (auto _ : state) benchmark::DoNotOptimize(qtoa::corrections::asymptotic_toa(p, spec));
}
BENCHMARK(BM_AsymptoticToa);

void BM_ExactToa(benchmark::State& state) {
  const double K = static_cast<double>(state.range(0));
  const auto p = PacketParams::dimensionless(K, -5.0 / 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(qtoa::corrections::exact_toa(p, PhaseSpec{}));
}
BENCHMARK(BM_ExactToa)->Arg(10)->Arg(30)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_Distribution(benchmark::State& state) {
  const auto p = packet();
  const PhaseSpec spec =
      state.range(0) ? qtoa::phase_solver::double_root_phase(p.q0_over_sigma()) : PhaseSpec{};
  const auto grid = qtoa::toa_distribution::default_tau_grid(p);
  for (auto _ : state)
    benchmark::DoNotOptimize(qtoa::toa_distribution::distribution(p, spec, 0.0, grid));
}
BENCHMARK(BM_Distribution)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SolveClosedVsNumeric(benchmark::State& state) {
  const auto method = state.range(0) ? qtoa::phase_solver::SolveMethod::numeric
                                     : qtoa::phase_solver::SolveMethod::closed_form;
  for (auto _ : state)
    benchmark::DoNotOptimize(qtoa::phase_solver::solve_a_from_b(0.0728, 1.0, -1.5588, method));
}
BENCHMARK(BM_SolveClosedVsNumeric)->Arg(0)->Arg(1);

void BM_GeneralSolve(benchmark::State& state) {
  const qtoa::wavepacket::PhaseBasisTerm basis[] = {{qtoa::wavepacket::Parity::odd, 0, 1},
                                                    {qtoa::wavepacket::Parity::even, 0, 1}};
  for (auto _ : state)
    benchmark::DoNotOptimize(qtoa::phase_solver::solve_phase_general(2, basis, -5.0 / 3.0));
}
BENCHMARK(BM_GeneralSolve)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
