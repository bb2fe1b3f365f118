#include "qtoa/numerics/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qtoa::numerics {

const KronrodRule& kronrod21() {
  static const KronrodRule rule = [] {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto& x = gauss_kronrod<double, 21>::abscissa();
    const auto& wk = gauss_kronrod<double, 21>::weights();
    const auto& wg = gauss<double, 10>::weights();
    KronrodRule r{};
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      r.x[i] = x[i];
      r.kronrod_w[i] = wk[i];
      r.gauss_w[i] = (i % 2 == 1) ? wg[i / 2] : 0.0;
    }
    return r;
  }();
  return rule;
}

}  // namespace qtoa::numerics
