#include "qtoa/imprint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "qtoa/errors.hpp"

namespace qtoa::imprint {

double SampledWavefunction::norm() const {
  double n = 0.0;
  for (std::size_t i = 1; i < q.size(); ++i)
    n += 0.5 * (std::norm(psi[i]) + std::norm(psi[i - 1])) * (q[i] - q[i - 1]);
  return n;
}

ImprintConfig ImprintConfig::from_phase(const PhaseSpec& spec, const PacketParams& params,
                                        double gamma) {
  params.validate();
  if (gamma == 0.0) throw InvalidParameter("from_phase: gamma must be nonzero");
  ImprintConfig c;
  c.gamma = gamma;
  const double scale = params.hbar / gamma;
  const double q0 = params.q0, sigma = params.sigma;
  c.profile = [spec, scale, q0, sigma](double q) {
    return scale * wavepacket::phase_value(spec, (q - q0) / sigma);
  };
  return c;
}

ImprintConfig ImprintConfig::from_samples(std::vector<double> q, std::vector<double> theta,
                                          double gamma) {
  if (q.size() != theta.size() || q.empty())
    throw InvalidParameter("from_samples: need matching, nonempty samples");
  for (std::size_t i = 1; i < q.size(); ++i)
    if (!(q[i] > q[i - 1])) throw InvalidParameter("from_samples: positions must increase");
  ImprintConfig c;
  c.gamma = gamma;
  auto qs = std::make_shared<const std::vector<double>>(std::move(q));
  auto ts = std::make_shared<const std::vector<double>>(std::move(theta));
  c.profile = [qs, ts](double x) {
    const auto& Q = *qs;
    const auto& T = *ts;
    if (x <= Q.front()) return T.front();
    if (x >= Q.back()) return T.back();
    const std::size_t j = static_cast<std::size_t>(std::upper_bound(Q.begin(), Q.end(), x) - Q.begin());
    const double f = (x - Q[j - 1]) / (Q[j] - Q[j - 1]);
    return T[j - 1] + f * (T[j] - T[j - 1]);
  };
  return c;
}

SampledWavefunction imprint(const SampledWavefunction& psi_in, const ImprintConfig& config,
                            double hbar) {
  if (!(hbar > 0.0)) throw InvalidParameter("imprint: hbar must be positive");
  if (psi_in.q.size() != psi_in.psi.size())
    throw InvalidParameter("imprint: grid and samples differ in length");
  SampledWavefunction out = psi_in;
  if (config.gamma == 0.0) return out;
  if (!config.profile) throw InvalidParameter("imprint: missing profile");
  for (std::size_t i = 0; i < out.q.size(); ++i)
    out.psi[i] *= std::polar(1.0, config.gamma * config.profile(out.q[i]) / hbar);
  return out;
}

SampledWavefunction sample_packet(const PacketParams& params, const PhaseSpec& spec,
                                  std::span<const double> q) {
  params.validate();
  SampledWavefunction s;
  s.q.assign(q.begin(), q.end());
  s.psi.reserve(q.size());
  const double k = params.wavenumber();
  const double amp = 1.0 / std::sqrt(params.sigma);
  for (double qi : q) {
    const double x = (qi - params.q0) / params.sigma;
    s.psi.push_back(amp * wavepacket::wavefunction(spec, x) * std::polar(1.0, k * qi));
  }
  return s;
}

std::vector<double> packet_grid(const PacketParams& params, double half_width_in_sigma,
                                int points) {
  params.validate();
  if (points < 2) throw InvalidParameter("packet_grid: need at least two points");
  std::vector<double> g(points);
  const double lo = params.q0 - half_width_in_sigma * params.sigma;
  const double hi = params.q0 + half_width_in_sigma * params.sigma;
  for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
  return g;
}

corrections::Envelope imprinted_envelope(const PacketParams& params, const ImprintConfig& config) {
  params.validate();
  const PhaseSpec bare;
  const double hbar = params.hbar, q0 = params.q0, sigma = params.sigma;
  return [bare, config, hbar, q0, sigma](long double x) {
    const std::complex<long double> base = wavepacket::wavefunction_extended(bare, x);
    if (config.gamma == 0.0) return base;
    const long double q = static_cast<long double>(sigma) * x + q0;
    const long double kick =
        static_cast<long double>(config.gamma) * config.profile(static_cast<double>(q)) / hbar;
    return base * std::polar(1.0L, kick);
  };
}

corrections::ExactToa imprinted_exact_toa(const PacketParams& params, const ImprintConfig& config,
                                          double half_width, corrections::ExactToaOptions options) {
  options.envelope_precision =
      std::max(options.envelope_precision,
               static_cast<long double>(std::numeric_limits<double>::epsilon()));
  return corrections::exact_toa(params, imprinted_envelope(params, config), half_width, options);
}

}  // namespace qtoa::imprint
