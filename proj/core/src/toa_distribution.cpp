#include "qtoa/toa_distribution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "qtoa/corrections.hpp"
#include "qtoa/errors.hpp"

namespace qtoa::toa_distribution {

using numerics::pi;
using cd = std::complex<double>;

namespace {

// Dimensionless units: s = p sigma/hbar, T = tau/t0 with t0 = mu sigma^2/hbar,
// xi = X/sigma. The packet amplitude in s is
//   g(s) = exp(i (K - s) u) h(K - s),  h(kappa) = (2 pi)^{-1/2} int envelope(x) e^{i kappa x} dx,
// and the amplitude on a time eigenfunction is (4 pi t0)^{-1/2} A(T) with
//   A(T) = int sqrt|s| [sgn s] exp(i (s xi - s^2 T/2)) g(s) ds.

constexpr double kEnvelopeCut = 6.0;   // |x| range that sets the momentum window
constexpr double kWindowPad = 5.0;
constexpr double kTransformHalfWidth = 12.0;
constexpr int kNodes = 16;

struct Plan {
  std::vector<double> s;
  std::vector<cd> weighted;  // w * sqrt|s| * exp(i s xi) * g(s)
};

// Envelope transform h(kappa) on many points. For the bare Gaussian it is closed
// form; otherwise a trapezoid sum on a uniform x grid fine enough that aliased
// copies of h fall outside the momentum window.
class EnvelopeTransform {
 public:
  EnvelopeTransform(const PhaseSpec& spec, double max_kappa) : bare_(spec.empty()) {
    if (bare_) return;
    const double dx = 2.0 * pi / (2.5 * max_kappa + 20.0);
    const int n = static_cast<int>(std::ceil(2.0 * kTransformHalfWidth / dx));
    dx_ = 2.0 * kTransformHalfWidth / n;
    x0_ = -kTransformHalfWidth;
    f_.resize(n + 1);
    for (int j = 0; j <= n; ++j) f_[j] = wavepacket::wavefunction(spec, x0_ + j * dx_);
  }

  cd operator()(double kappa) const {
    if (bare_) return std::pow(2.0 * pi, -0.75) * 2.0 * std::sqrt(pi) * std::exp(-kappa * kappa);
    const cd step = std::polar(1.0, kappa * dx_);
    cd rot = std::polar(1.0, kappa * x0_);
    cd acc{};
    for (const cd& v : f_) {
      acc += v * rot;
      rot *= step;
    }
    // end points carry half weight; the envelope is negligible there
    return acc * dx_ / std::sqrt(2.0 * pi);
  }

 private:
  bool bare_;
  double dx_ = 0.0, x0_ = 0.0;
  std::vector<cd> f_;
};

struct Window {
  double lo, hi;
};

Window momentum_window(const PhaseSpec& spec, double K) {
  double tmin = 0.0, tmax = 0.0;
  if (!spec.empty()) {
    tmin = tmax = spec.theta_prime()(0.0);
    for (int i = -1200; i <= 1200; ++i) {
      const double v = spec.theta_prime()(kEnvelopeCut * i / 1200.0);
      tmin = std::min(tmin, v);
      tmax = std::max(tmax, v);
    }
  }
  return {K + tmin - kWindowPad, K + tmax + kWindowPad};
}

const std::array<double, kNodes>& unit_nodes_weights(bool weights) {
  static const auto table = [] {
    using boost::math::quadrature::gauss;
    const auto& x = gauss<double, kNodes>::abscissa();
    const auto& w = gauss<double, kNodes>::weights();
    std::pair<std::array<double, kNodes>, std::array<double, kNodes>> r{};
    int k = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      r.first[k] = x[i];
      r.second[k++] = w[i];
      r.first[k] = -x[i];
      r.second[k++] = w[i];
    }
    return r;
  }();
  return weights ? table.second : table.first;
}

Plan make_plan(const PacketParams& params, const PhaseSpec& spec, double xi, double t_min,
               double t_max) {
  const double K = params.k_sigma();
  const double u = params.q0_over_sigma();
  const Window win = momentum_window(spec, K);
  const EnvelopeTransform h(spec, std::max(std::abs(win.lo - K), std::abs(win.hi - K)));

  double R = 0.0;
  for (double s : {win.lo, win.hi})
    for (double T : {t_min, t_max}) R = std::max(R, std::abs(xi - u - s * T));
  R += kEnvelopeCut;
  // 16 Gauss-Legendre nodes per period of the fastest phase leave errors far below 1e-12.
  const double max_len = std::min(0.5, 2.0 * pi / R);

  std::vector<double> cuts{win.lo};
  if (win.lo < 0.0 && win.hi > 0.0) cuts.push_back(0.0);
  cuts.push_back(win.hi);

  const auto& t = unit_nodes_weights(false);
  const auto& w = unit_nodes_weights(true);
  Plan plan;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = cuts[c], b = cuts[c + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / max_len)));
    const double len = (b - a) / pieces;
    for (int p = 0; p < pieces; ++p) {
      const double pa = a + p * len;
      const double mid = pa + 0.5 * len;
      for (int i = 0; i < kNodes; ++i) {
        const double s = mid + 0.5 * len * t[i];
        const double kappa = K - s;
        const cd g = std::polar(1.0, kappa * u) * h(kappa);
        plan.s.push_back(s);
        plan.weighted.push_back(0.5 * len * w[i] * std::sqrt(std::abs(s)) *
                                std::polar(1.0, s * xi) * g);
      }
    }
  }
  return plan;
}

// A_non(T), A_nod(T)
std::pair<cd, cd> amplitudes(const Plan& plan, double T) {
  cd non{}, nod{};
  for (std::size_t n = 0; n < plan.s.size(); ++n) {
    const double s = plan.s[n];
    const cd v = plan.weighted[n] * std::polar(1.0, -0.5 * s * s * T);
    non += v;
    nod += s < 0.0 ? -v : v;
  }
  return {non, nod};
}

}  // namespace

cd overlap(const PacketParams& params, const PhaseSpec& spec, double X, double tau,
           OverlapKind kind) {
  params.validate();
  const double t0 = params.dispersion_time();
  const double T = tau / t0;
  const Plan plan = make_plan(params, spec, X / params.sigma, T, T);
  const auto [non, nod] = amplitudes(plan, T);
  const double norm = 1.0 / std::sqrt(4.0 * pi * t0);
  return norm * (kind == OverlapKind::non_nodal ? non : nod);
}

ToaDistribution distribution(const PacketParams& params, const PhaseSpec& spec, double X,
                             std::span<const double> tau_grid) {
  params.validate();
  if (tau_grid.empty()) throw InvalidParameter("distribution: empty time grid");
  for (std::size_t i = 1; i < tau_grid.size(); ++i)
    if (!(tau_grid[i] > tau_grid[i - 1]))
      throw InvalidParameter("distribution: time grid must be strictly increasing");

  const double t0 = params.dispersion_time();
  const Plan plan = make_plan(params, spec, X / params.sigma, tau_grid.front() / t0,
                              tau_grid.back() / t0);
  ToaDistribution d;
  d.arrival_point = X;
  d.tau.assign(tau_grid.begin(), tau_grid.end());
  const std::size_t n = tau_grid.size();
  d.pi_non.resize(n);
  d.pi_nod.resize(n);
  d.pi_total.resize(n);
  const double scale = 1.0 / (4.0 * pi * t0);
  auto store = [&](std::size_t i, cd non, cd nod) {
    d.pi_non[i] = std::norm(non) * scale;
    d.pi_nod[i] = std::norm(nod) * scale;
    d.pi_total[i] = d.pi_non[i] + d.pi_nod[i];
  };

  bool uniform = n > 2;
  const double step = n > 1 ? (tau_grid.back() - tau_grid.front()) / static_cast<double>(n - 1) : 0.0;
  for (std::size_t i = 1; i < n && uniform; ++i)
    uniform = std::abs(tau_grid[i] - tau_grid.front() - step * static_cast<double>(i)) <=
              1e-12 * (std::abs(tau_grid.front()) + std::abs(tau_grid.back()));

  if (!uniform) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto [non, nod] = amplitudes(plan, tau_grid[i] / t0);
      store(i, non, nod);
    }
  } else {
    // On a uniform grid the time phase of each node advances by a fixed rotation;
    // it is recomputed directly every kResync points to bound drift.
    constexpr std::size_t kResync = 64;
    const std::size_t m = plan.s.size();
    std::vector<cd> current(m), rotation(m);
    for (std::size_t k = 0; k < m; ++k)
      rotation[k] = std::polar(1.0, -0.5 * plan.s[k] * plan.s[k] * step / t0);
    for (std::size_t i = 0; i < n; ++i) {
      if (i % kResync == 0) {
        const double T = tau_grid[i] / t0;
        for (std::size_t k = 0; k < m; ++k)
          current[k] = plan.weighted[k] * std::polar(1.0, -0.5 * plan.s[k] * plan.s[k] * T);
      }
      cd non{}, nod{};
      for (std::size_t k = 0; k < m; ++k) {
        non += current[k];
        nod += plan.s[k] < 0.0 ? -current[k] : current[k];
        current[k] *= rotation[k];
      }
      store(i, non, nod);
    }
  }
  for (std::size_t i = 1; i < n; ++i)
    d.grid_mass += 0.5 * (d.pi_total[i] + d.pi_total[i - 1]) * (d.tau[i] - d.tau[i - 1]);
  return d;
}

std::vector<double> default_tau_grid(const PacketParams& params, double X,
                                     double half_width_factor, int points) {
  params.validate();
  if (points < 2) throw InvalidParameter("default_tau_grid: need at least two points");
  const double v0 = params.speed();
  const double center = (X - params.q0) / v0;
  const double spread = std::hypot(params.sigma / v0, center / (2.0 * params.k_sigma()));
  const double lo = center - half_width_factor * spread;
  const double hi = center + half_width_factor * spread;
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = lo + (hi - lo) * i / (points - 1);
  return grid;
}

ToaDistribution auto_distribution(const PacketParams& params, const PhaseSpec& spec, double X) {
  ToaDistribution d = distribution(params, spec, X, default_tau_grid(params, X));
  if (d.grid_mass < 0.999) d = distribution(params, spec, X, default_tau_grid(params, X, 10.0));
  return d;
}

double fwhm(std::span<const double> tau, std::span<const double> density) {
  if (tau.size() != density.size() || tau.size() < 3)
    throw InvalidParameter("fwhm: need matching grids of at least three points");
  const auto it = std::max_element(density.begin(), density.end());
  const std::size_t imax = static_cast<std::size_t>(it - density.begin());
  const std::size_t last = density.size() - 1;
  if (imax == 0 || imax == last)
    throw GridTooNarrow("fwhm: maximum lies on the grid boundary; widen the time grid");
  const double half = 0.5 * *it;

  std::size_t i = 0;
  while (density[i] < half) ++i;
  if (i == 0) throw GridTooNarrow("fwhm: no half-maximum crossing below the peak; widen the grid");
  std::size_t j = last;
  while (density[j] < half) --j;
  if (j == last) throw GridTooNarrow("fwhm: no half-maximum crossing above the peak; widen the grid");

  auto cross = [&](std::size_t a, std::size_t b) {
    const double fa = density[a], fb = density[b];
    return tau[a] + (half - fa) * (tau[b] - tau[a]) / (fb - fa);
  };
  return cross(j, j + 1) - cross(i - 1, i);
}

double fwhm(const ToaDistribution& dist) { return fwhm(dist.tau, dist.pi_total); }

double first_moment(const ToaDistribution& dist) {
  double m = 0.0;
  for (std::size_t i = 1; i < dist.tau.size(); ++i) {
    const double dt = dist.tau[i] - dist.tau[i - 1];
    m += 0.5 * (dist.tau[i] * dist.pi_total[i] + dist.tau[i - 1] * dist.pi_total[i - 1]) * dt;
  }
  if (!(dist.grid_mass > 0.0)) throw DegenerateInput("first_moment: zero grid mass");
  return m / dist.grid_mass;
}

double fluctuation_ratio(const PacketParams& params, const PhaseSpec& spec, double X,
                         std::span<const double> tau_grid) {
  const ToaDistribution d = distribution(params, spec, X, tau_grid);
  const double width = fwhm(d);
  PacketParams shifted = params;
  shifted.q0 = params.q0 - X;
  const double mean = corrections::exact_toa(shifted, spec).value;
  if (!(mean > 0.0))
    throw DegenerateInput("fluctuation_ratio: expected arrival time is not positive");
  return width / mean;
}

}  // namespace qtoa::toa_distribution
