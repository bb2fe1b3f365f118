#include "qtoa/numerics/special.hpp"

#include <cmath>
#include <string>

#include "qtoa/errors.hpp"

namespace qtoa::numerics {

double hermite(int n, double x) {
  if (n < 0) throw InvalidParameter("hermite: negative order " + std::to_string(n));
  if (n == 0) return 1.0;
  double prev = 1.0;
  double curr = 2.0 * x;
  for (int j = 1; j < n; ++j) {
    const double next = 2.0 * x * curr - 2.0 * j * prev;
    prev = curr;
    curr = next;
  }
  return curr;
}

double double_factorial(int n) {
  if (n < -1) throw InvalidParameter("double_factorial: argument below -1");
  if (n > 299) throw Overflow("double_factorial: n!! overflows for n > 299");
  double r = 1.0;
  for (int j = n; j > 1; j -= 2) r *= j;
  return r;
}

double gaussian_moment(int k) {
  if (k < 0) throw InvalidParameter("gaussian_moment: negative order");
  if (k > 300) throw Overflow("gaussian_moment: order above 300");
  if (k % 2 == 1) return 0.0;
  return double_factorial(k - 1);
}

double standard_normal_density(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi);
}

}  // namespace qtoa::numerics
