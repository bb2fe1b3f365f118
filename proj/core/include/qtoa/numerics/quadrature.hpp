#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include "qtoa/errors.hpp"
#include "qtoa/numerics/special.hpp"

namespace qtoa::numerics {

template <class T>
struct BasicQuadratureResult {
  T value{};
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

using QuadratureResult = BasicQuadratureResult<double>;
using ComplexQuadratureResult = BasicQuadratureResult<std::complex<double>>;

struct QuadratureOptions {
  /// Maximum number of subintervals kept by the adaptive driver.
  std::size_t max_segments = 4000;
  /// Infinite limits of oscillatory integrals are replaced by +/- tail_cut.
  double tail_cut = 12.0;
};

/// 21-point Gauss-Kronrod rule on [-1, 1]: node i >= 1 is used as +/- x[i].
/// Odd i are the embedded 10-point Gauss nodes.
struct KronrodRule {
  std::array<double, 11> x;
  std::array<double, 11> kronrod_w;
  std::array<double, 11> gauss_w;  // zero at Kronrod-only nodes
};
const KronrodRule& kronrod21();

namespace detail {

template <class F>
using result_of_t = std::decay_t<std::invoke_result_t<F&, double>>;

template <class R>
double magnitude(const R& v) {
  return std::abs(v);
}

template <class R>
struct Segment {
  double a, b;
  R value;
  double error;
  double abs_value;  // integral of |f| by the Kronrod rule
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment<result_of_t<F>> apply_rule(F& f, double a, double b) {
  using R = result_of_t<F>;
  const KronrodRule& rule = kronrod21();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const R f0 = f(c);
  R k = f0 * rule.kronrod_w[0];
  R g{};
  double abs_k = magnitude(f0) * rule.kronrod_w[0];
  for (std::size_t i = 1; i < rule.x.size(); ++i) {
    const R fl = f(c + h * rule.x[i]);
    const R fr = f(c - h * rule.x[i]);
    const R s = fl + fr;
    k += s * rule.kronrod_w[i];
    g += s * rule.gauss_w[i];
    abs_k += (magnitude(fl) + magnitude(fr)) * rule.kronrod_w[i];
  }
  return {a, b, k * h, magnitude(R((k - g) * h)), abs_k * std::abs(h)};
}

}  // namespace detail

/// Globally adaptive 21-point Gauss-Kronrod quadrature on a finite interval.
/// Converges when the summed per-segment |Kronrod - Gauss| estimate is <= tol, or
/// when it has reached the rounding level 50 eps * integral |f|; the reported
/// error estimate is then larger than tol.
template <class F>
BasicQuadratureResult<detail::result_of_t<F>> integrate_finite(F&& f, double a, double b,
                                                               double tol,
                                                               const QuadratureOptions& opt = {}) {
  using R = detail::result_of_t<F>;
  if (!(tol > 0.0)) throw InvalidParameter("integrate: tolerance must be positive");
  if (!(std::isfinite(a) && std::isfinite(b)))
    throw InvalidParameter("integrate_finite: limits must be finite");
  BasicQuadratureResult<R> out;
  if (a == b) return out;
  const double sign = b > a ? 1.0 : -1.0;
  if (b < a) std::swap(a, b);

  std::priority_queue<detail::Segment<R>> heap;
  heap.push(detail::apply_rule(f, a, b));
  std::size_t evaluations = 21;
  double total_error = heap.top().error;
  double total_abs = heap.top().abs_value;
  constexpr double kRoundoff = 50.0 * std::numeric_limits<double>::epsilon();
  auto target = [&] { return std::max(tol, kRoundoff * total_abs); };

  auto finish = [&](bool converged) {
    R value{};
    double err = 0.0;
    std::vector<detail::Segment<R>> segs;
    while (!heap.empty()) {
      segs.push_back(heap.top());
      heap.pop();
    }
    std::sort(segs.begin(), segs.end(),
              [](const auto& l, const auto& r) { return l.a < r.a; });
    for (const auto& s : segs) {
      value += s.value;
      err += s.error;
    }
    out.value = value * sign;
    out.error_estimate = err;
    out.evaluations = evaluations;
    if (!converged) {
      throw NumericalFailure("integrate: no convergence after " +
                                 std::to_string(opt.max_segments) + " segments",
                             detail::magnitude(out.value), err);
    }
    return out;
  };

  while (total_error > target()) {
    if (heap.size() >= opt.max_segments) return finish(false);
    const detail::Segment<R> worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) return finish(false);
    heap.pop();
    auto left = detail::apply_rule(f, worst.a, mid);
    auto right = detail::apply_rule(f, mid, worst.b);
    evaluations += 42;
    total_error += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
    if (total_error <= target()) {
      // Recompute from scratch so cancellation in the running update cannot
      // report convergence that the segments do not support.
      double fresh = 0.0;
      auto copy = heap;
      while (!copy.empty()) {
        fresh += copy.top().error;
        copy.pop();
      }
      total_error = fresh;
    }
  }
  return finish(true);
}

/// Adaptive quadrature on [a, b] where either limit may be infinite.
/// Unbounded ranges are mapped onto finite ones by x = t/(1-t^2) or x = a + t/(1-t).
template <class F>
BasicQuadratureResult<detail::result_of_t<F>> integrate(F&& f, double a, double b, double tol,
                                                        const QuadratureOptions& opt = {}) {
  using R = detail::result_of_t<F>;
  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);
  if (!lo_inf && !hi_inf) return integrate_finite(f, a, b, tol, opt);
  if (lo_inf && hi_inf) {
    const double sign = a < b ? 1.0 : -1.0;
    auto g = [&](double t) -> R {
      const double d = 1.0 - t * t;
      return f(t / d) * ((1.0 + t * t) / (d * d));
    };
    auto r = integrate_finite(g, -1.0, 1.0, tol, opt);
    r.value = r.value * sign;
    return r;
  }
  if (hi_inf) {
    const double dir = b > 0 ? 1.0 : -1.0;
    auto g = [&](double t) -> R {
      const double d = 1.0 - t;
      return f(a + dir * t / d) * (1.0 / (d * d));
    };
    auto r = integrate_finite(g, 0.0, 1.0, tol, opt);
    r.value = r.value * dir;
    return r;
  }
  // lower limit infinite, upper finite: integral from a to b = -(integral from b to a)
  auto r = integrate(f, b, a, tol, opt);
  r.value = -r.value;
  return r;
}

/// Integral of f(x) exp(i kappa x) over [a, b]. The range is split into pieces of
/// length at most pi/|kappa|, each integrated adaptively with an equal share of tol.
/// Infinite limits are truncated at +/- opt.tail_cut.
template <class F>
ComplexQuadratureResult integrate_oscillatory(F&& f, double kappa, double a, double b,
                                              double tol, const QuadratureOptions& opt = {}) {
  if (!(tol > 0.0)) throw InvalidParameter("integrate_oscillatory: tolerance must be positive");
  const double sign = a <= b ? 1.0 : -1.0;
  double lo = std::min(a, b), hi = std::max(a, b);
  if (std::isinf(lo)) lo = -opt.tail_cut;
  if (std::isinf(hi)) hi = opt.tail_cut;
  ComplexQuadratureResult out;
  if (!(hi > lo)) return out;

  std::size_t pieces = 1;
  if (kappa != 0.0) pieces = static_cast<std::size_t>(std::ceil((hi - lo) * std::abs(kappa) / pi));
  pieces = std::max<std::size_t>(pieces, 1);
  const double h = (hi - lo) / static_cast<double>(pieces);
  const double piece_tol = tol / static_cast<double>(pieces);

  auto g = [&](double x) -> std::complex<double> {
    return std::complex<double>(f(x)) * std::polar(1.0, kappa * x);
  };
  for (std::size_t i = 0; i < pieces; ++i) {
    const double l = lo + h * static_cast<double>(i);
    const double r = (i + 1 == pieces) ? hi : lo + h * static_cast<double>(i + 1);
    const auto part = integrate_finite(g, l, r, piece_tol, opt);
    out.value += part.value;
    out.error_estimate += part.error_estimate;
    out.evaluations += part.evaluations;
  }
  out.value *= sign;
  return out;
}

}  // namespace qtoa::numerics
