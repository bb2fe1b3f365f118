#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <type_traits>
#include <utility>
#include <vector>

#include "qtoa/numerics/special.hpp"

namespace qtoa::numerics {

/// Dense polynomial in the power basis; coefficients_[k] multiplies x^k.
/// Trailing zero coefficients are removed, so the zero polynomial is empty.
template <class T>
class Polynomial {
 public:
  using value_type = T;

  Polynomial() = default;
  Polynomial(std::initializer_list<T> c) : c_(c) { trim(); }
  explicit Polynomial(std::vector<T> c) : c_(std::move(c)) { trim(); }

  static Polynomial constant(T value) { return Polynomial({value}); }
  static Polynomial monomial(int power, T value = T(1)) {
    std::vector<T> c(static_cast<std::size_t>(power) + 1, T(0));
    c.back() = value;
    return Polynomial(std::move(c));
  }

  const std::vector<T>& coefficients() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  int degree() const noexcept { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }
  T coefficient(int k) const {
    return (k >= 0 && static_cast<std::size_t>(k) < c_.size()) ? c_[k] : T(0);
  }

  /// Horner evaluation accumulated in type R.
  template <class R, class X>
  R evaluate(X x) const {
    R acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + R(*it);
    return acc;
  }
  T operator()(double x) const { return evaluate<T>(x); }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<T> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }
  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) { return *this += -o; }
  Polynomial& operator*=(const Polynomial& o) {
    if (c_.empty() || o.c_.empty()) {
      c_.clear();
      return *this;
    }
    std::vector<T> r(c_.size() + o.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    c_ = std::move(r);
    trim();
    return *this;
  }
  Polynomial& operator*=(T s) {
    for (auto& v : c_) v *= s;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend Polynomial operator*(Polynomial a, T s) { return a *= s; }
  friend Polynomial operator*(T s, Polynomial a) { return a *= s; }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
  }

  std::vector<T> c_;
};

using RealPolynomial = Polynomial<double>;
using ComplexPolynomial = Polynomial<std::complex<double>>;

inline ComplexPolynomial to_complex(const RealPolynomial& p) {
  std::vector<std::complex<double>> c(p.coefficients().begin(), p.coefficients().end());
  return ComplexPolynomial(std::move(c));
}

inline ComplexPolynomial conj(const ComplexPolynomial& p) {
  std::vector<std::complex<double>> c = p.coefficients();
  for (auto& v : c) v = std::conj(v);
  return ComplexPolynomial(std::move(c));
}

inline RealPolynomial real_part(const ComplexPolynomial& p) {
  std::vector<double> c;
  for (const auto& v : p.coefficients()) c.push_back(v.real());
  return RealPolynomial(std::move(c));
}

inline RealPolynomial imag_part(const ComplexPolynomial& p) {
  std::vector<double> c;
  for (const auto& v : p.coefficients()) c.push_back(v.imag());
  return RealPolynomial(std::move(c));
}

/// Physicists' Hermite polynomial H_n in the power basis.
inline RealPolynomial hermite_polynomial(int n) {
  RealPolynomial prev = RealPolynomial::constant(1.0);
  if (n == 0) return prev;
  RealPolynomial curr = RealPolynomial::monomial(1, 2.0);
  const RealPolynomial two_x = RealPolynomial::monomial(1, 2.0);
  for (int j = 1; j < n; ++j) {
    RealPolynomial next = two_x * curr - prev * (2.0 * j);
    prev = std::move(curr);
    curr = std::move(next);
  }
  return curr;
}

/// Exact expectation of a polynomial under the standard normal density.
/// `magnitude` is the sum of |c_k| E[x^k], a scale for rounding error bounds.
template <class T>
struct GaussianExpectation {
  T value{};
  double magnitude = 0.0;
};

template <class T>
GaussianExpectation<T> gaussian_expectation(const Polynomial<T>& p) {
  GaussianExpectation<T> r;
  const auto& c = p.coefficients();
  for (std::size_t k = 0; k < c.size(); k += 2) {
    const double m = gaussian_moment(static_cast<int>(k));
    r.value += c[k] * m;
    r.magnitude += std::abs(c[k]) * m;
  }
  return r;
}

}  // namespace qtoa::numerics
