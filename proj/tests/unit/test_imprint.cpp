#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace qtoa::imprint;
using qtoa::wavepacket::PhaseSpec;

TEST(Imprint, ZeroCouplingIsIdentity) {
  const auto p = qtoa::test::neutron_params();
  const auto grid = packet_grid(p);
  const auto psi = sample_packet(p, PhaseSpec{}, grid);
  const auto cfg = ImprintConfig::from_samples({-20.0, 0.0}, {1.0, 3.0}, 0.0);
  const auto out = imprint(psi, cfg, p.hbar);
  EXPECT_EQ(out.psi, psi.psi);
  EXPECT_EQ(out.q, psi.q);
}

TEST(Imprint, ReproducesDirectlyPhasedPacket) {
  const auto p = qtoa::test::neutron_params();
  const auto spec = qtoa::test::neutron_phase();
  const auto grid = packet_grid(p);
  const auto kicked = imprint(sample_packet(p, PhaseSpec{}, grid),
                              ImprintConfig::from_phase(spec, p, 0.37), p.hbar);
  const auto direct = sample_packet(p, spec, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    worst = std::max(worst, std::abs(kicked.psi[i] - direct.psi[i]));
  EXPECT_LT(worst, 1e-12);
}

TEST(Imprint, NormPreservedForRandomProfiles) {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> ug(-5.0, 5.0), uv(-3.0, 3.0);
  const auto p = qtoa::test::neutron_params();
  const auto grid = packet_grid(p);
  const auto psi = sample_packet(p, PhaseSpec{}, grid);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-10);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> q, th;
    for (int i = 0; i < 30; ++i) {
      q.push_back(-90.0 + 6.0 * i);
      th.push_back(uv(rng));
    }
    const auto out = imprint(psi, ImprintConfig::from_samples(q, th, ug(rng)), p.hbar);
    EXPECT_NEAR(out.norm(), psi.norm(), 1e-12);
  }
}

TEST(Imprint, KicksCompose) {
  const auto p = qtoa::test::neutron_params();
  const auto grid = packet_grid(p);
  const auto psi = sample_packet(p, PhaseSpec{}, grid);
  const std::vector<double> q{-60.0, -20.0, 0.0, 30.0}, th{0.5, -1.0, 2.0, 0.3};
  const double g1 = 0.8, g2 = -2.3;
  const auto twice = imprint(imprint(psi, ImprintConfig::from_samples(q, th, g1), p.hbar),
                             ImprintConfig::from_samples(q, th, g2), p.hbar);
  const auto once = imprint(psi, ImprintConfig::from_samples(q, th, g1 + g2), p.hbar);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_LT(std::abs(twice.psi[i] - once.psi[i]), 1e-12);
}

TEST(Imprint, SampledProfileInterpolates) {
  const auto cfg = ImprintConfig::from_samples({0.0, 1.0, 3.0}, {0.0, 2.0, 0.0}, 1.0);
  EXPECT_EQ(cfg.profile(-1.0), 0.0);
  EXPECT_EQ(cfg.profile(0.5), 1.0);
  EXPECT_EQ(cfg.profile(2.0), 1.0);
  EXPECT_EQ(cfg.profile(5.0), 0.0);
  EXPECT_THROW(ImprintConfig::from_samples({0.0, 0.0}, {1.0, 1.0}, 1.0), qtoa::InvalidParameter);
  EXPECT_THROW(ImprintConfig::from_samples({0.0}, {}, 1.0), qtoa::InvalidParameter);
  EXPECT_THROW(ImprintConfig::from_phase(PhaseSpec{}, qtoa::test::neutron_params(), 0.0),
               qtoa::InvalidParameter);
}

TEST(Imprint, ArrivalTimeOfKickedPacket) {
  const auto p = qtoa::test::neutron_params();
  const auto spec = qtoa::test::neutron_phase();
  const auto cfg = ImprintConfig::from_phase(spec, p, 1.0);
  const double L = qtoa::wavepacket::truncation_half_width(spec, p.q0_over_sigma());
  const auto kicked = imprinted_exact_toa(p, cfg, L);
  const auto direct = qtoa::corrections::exact_toa(p, spec);
  EXPECT_LE(std::abs(kicked.value - direct.value), kicked.error_estimate + direct.error_estimate);
}
