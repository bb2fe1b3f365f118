#pragma once

namespace qtoa::numerics {

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Physicists' Hermite polynomial H_n(x) by upward recurrence.
double hermite(int n, double x);

/// n!! for n >= -1, with (-1)!! = 0!! = 1. Throws Overflow for n > 299.
double double_factorial(int n);

/// k-th raw moment of the standard normal density: 0 for odd k, (k-1)!! for even k.
/// Throws Overflow for k > 300.
double gaussian_moment(int k);

/// Standard normal density (2 pi)^{-1/2} exp(-x^2/2).
double standard_normal_density(double x);

}  // namespace qtoa::numerics
