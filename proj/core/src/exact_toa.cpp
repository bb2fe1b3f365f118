#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <complex>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "qtoa/corrections.hpp"
#include "qtoa/errors.hpp"

// The expectation value of the arrival-time operator with kernel
// (mu / 4 i hbar)(q + q') sgn(q - q') in the dimensionless variables reads
//
//   tau / (sigma/v0) = (K / 4i) * int dx conj(f(x)) e^{-iKx} J(x),
//   J(x) = 2[(x + 2u) C0(x) + C1(x)] - [(x + 2u) C0(L) + C1(L)],
//   C_j(x) = int_{-L}^{x} y^j f(y) e^{iKy} dy.
//
// [-L, L] is split into segments on which a Gauss-Legendre rule resolves the
// oscillation; C_j at an outer node is the prefix sum over whole segments plus a
// Gauss-Legendre integral over the partial segment.

namespace qtoa::corrections {

namespace {

using cld = std::complex<long double>;
constexpr int kNodes = 20;

struct Rule {
  std::array<long double, kNodes> t;  // nodes on [-1, 1]
  std::array<long double, kNodes> w;
};

const Rule& legendre_rule() {
  static const Rule rule = [] {
    using boost::math::quadrature::gauss;
    const auto& x = gauss<long double, kNodes>::abscissa();
    const auto& w = gauss<long double, kNodes>::weights();
    Rule r{};
    int k = 0;
    // Boost stores the nonnegative half of the symmetric rule.
    for (std::size_t i = 0; i < x.size(); ++i) {
      r.t[k] = x[i];
      r.w[k++] = w[i];
      if (x[i] != 0.0L) {
        r.t[k] = -x[i];
        r.w[k++] = w[i];
      }
    }
    return r;
  }();
  return rule;
}

struct Pair {
  cld c0;
  cld c1;
  long double l1 = 0.0L;  // integral of |y f(y)| + |f(y)|, a rounding scale
};

class Integrator {
 public:
  Integrator(const Envelope& f, long double K) : f_(f), K_(K) {}

  cld g(long double y) {
    ++evaluations_;
    return f_(y) * std::polar(1.0L, K_ * y);
  }

  Pair integrate(long double a, long double b) {
    const Rule& r = legendre_rule();
    const long double c = 0.5L * (a + b), h = 0.5L * (b - a);
    Pair p{};
    for (int i = 0; i < kNodes; ++i) {
      const long double y = c + h * r.t[i];
      const cld v = g(y) * r.w[i];
      p.c0 += v;
      p.c1 += v * y;
      p.l1 += std::abs(v) * (1.0L + std::abs(y));
    }
    p.c0 *= h;
    p.c1 *= h;
    p.l1 *= h;
    return p;
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  const Envelope& f_;
  long double K_;
  std::size_t evaluations_ = 0;
};

struct Segment {
  long double a, b;
  Pair value;  // integral over the segment
};

long double distance(const Pair& p, const Pair& q) {
  return std::max(std::abs(p.c0 - q.c0), std::abs(p.c1 - q.c1));
}

}  // namespace

ExactToa exact_toa(const PacketParams& params, const Envelope& envelope, double half_width,
                   const ExactToaOptions& options) {
  params.validate();
  if (!(half_width > 0.0)) throw InvalidParameter("exact_toa: half width must be positive");
  const long double K = params.k_sigma();
  const long double u = params.q0_over_sigma();
  const long double L = half_width;
  Integrator in(envelope, K);
  const long double precision =
      std::max(std::numeric_limits<long double>::epsilon(), options.envelope_precision);

  // Initial partition: pieces no longer than pi/K (and 1/2), refined adaptively.
  const long double pi_l = 3.141592653589793238462643383279502884L;
  const long double max_len = std::min(pi_l / K, 0.5L);
  const auto n0 = static_cast<std::size_t>(std::ceil(2.0L * L / max_len));
  std::vector<Segment> segments;
  long double inner_error = 0.0L;
  for (std::size_t i = 0; i < n0; ++i) {
    std::vector<std::pair<long double, long double>> stack;
    const long double a0 = -L + 2.0L * L * i / n0;
    const long double b0 = (i + 1 == n0) ? L : -L + 2.0L * L * (i + 1) / n0;
    stack.emplace_back(a0, b0);
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      stack.pop_back();
      const long double m = 0.5L * (a + b);
      const Pair whole = in.integrate(a, b);
      Pair halves = in.integrate(a, m);
      const Pair right = in.integrate(m, b);
      halves.c0 += right.c0;
      halves.c1 += right.c1;
      const long double err = distance(whole, halves);
      // Rounding floor: the argument K*y of the plane wave is only known to eps*K*L.
      const long double allowed =
          options.inner_tol * (b - a) / (2.0L * L) + 64.0L * precision * (1.0L + K * L) * whole.l1;
      if (err <= allowed || segments.size() + stack.size() >= options.max_segments) {
        segments.push_back({a, b, halves});
        inner_error += err;
      } else {
        stack.emplace_back(m, b);  // processed after the left half, keeping order
        stack.emplace_back(a, m);
      }
    }
  }
  if (segments.size() >= options.max_segments) {
    throw NumericalFailure("exact_toa: segment cap reached before the inner integrals converged");
  }

  Pair total{};
  for (const auto& s : segments) {
    total.c0 += s.value.c0;
    total.c1 += s.value.c1;
  }

  const Rule& r = legendre_rule();
  Pair prefix{};
  cld outer{};
  long double outer_error = 0.0L;
  long double abs_sum = 0.0L;
  long double envelope_l1 = 0.0L;

  auto outer_on = [&](long double a, long double b, long double seg_a) {
    // Outer Gauss-Legendre sum over [a, b] inside the segment starting at seg_a.
    const long double c = 0.5L * (a + b), h = 0.5L * (b - a);
    cld acc{};
    for (int i = 0; i < kNodes; ++i) {
      const long double x = c + h * r.t[i];
      const Pair part = in.integrate(seg_a, x);
      const cld c0 = prefix.c0 + part.c0;
      const cld c1 = prefix.c1 + part.c1;
      const long double w2u = x + 2.0L * u;
      const cld j = 2.0L * (w2u * c0 + c1) - (w2u * total.c0 + total.c1);
      const cld fx = envelope(x);
      const cld v = std::conj(fx) * std::polar(1.0L, -K * x) * j * (r.w[i] * h);
      acc += v;
      abs_sum += std::abs(v);
      envelope_l1 += std::abs(fx) * (std::abs(w2u) + 1.0L) * r.w[i] * h * 0.5L;
    }
    return acc;
  };

  for (const auto& s : segments) {
    const long double m = 0.5L * (s.a + s.b);
    const cld whole = outer_on(s.a, s.b, s.a);
    const cld halves = outer_on(s.a, m, s.a) + outer_on(m, s.b, s.a);
    outer += halves;
    outer_error += std::abs(whole - halves);
    prefix.c0 += s.value.c0;
    prefix.c1 += s.value.c1;
  }

  // (K / 4i) * outer = -(iK/4) * outer
  const cld tau = cld(0.0L, -K / 4.0L) * outer;
  const long double scale = params.time_scale();
  const long double eps = std::numeric_limits<long double>::epsilon();
  const long double err = K / 4.0L *
                          (outer_error + 4.0L * inner_error * envelope_l1 +
                           static_cast<long double>(kNodes) * std::max(eps, precision) * abs_sum);

  ExactToa out;
  out.value = static_cast<double>(tau.real() * scale);
  out.imag_part = static_cast<double>(tau.imag() * scale);
  out.error_estimate = static_cast<double>(err * scale) +
                       std::numeric_limits<double>::epsilon() * std::abs(out.value);
  out.tau_class = params.classical_toa();
  out.evaluations = in.evaluations();
  out.segments = segments.size();
  return out;
}

ExactToa exact_toa(const PacketParams& params, const PhaseSpec& spec,
                   const ExactToaOptions& options) {
  params.validate();
  const double L = wavepacket::truncation_half_width(spec, params.q0_over_sigma());
  const Envelope f = [&spec](long double x) { return wavepacket::wavefunction_extended(spec, x); };
  return exact_toa(params, f, L, options);
}

}  // namespace qtoa::corrections
