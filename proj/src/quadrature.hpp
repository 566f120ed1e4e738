#pragma once

#include <array>
#include <cstddef>

#include <boost/math/quadrature/gauss.hpp>

namespace jumpspec::detail {

struct GaussLegendre7 {
  std::array<double, 7> x{};
  std::array<double, 7> w{};
};

/// Nodes on [-1,1] in ascending order.
inline const GaussLegendre7& gl7() {
  static const GaussLegendre7 rule = [] {
    using boost::math::quadrature::gauss;
    const auto& a = gauss<double, 7>::abscissa();
    const auto& w = gauss<double, 7>::weights();
    GaussLegendre7 r;
    std::size_t k = 0;
    for (std::size_t i = a.size(); i-- > 1;) {
      r.x[k] = -a[i];
      r.w[k++] = w[i];
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      r.x[k] = a[i];
      r.w[k++] = w[i];
    }
    return r;
  }();
  return rule;
}

}  // namespace jumpspec::detail
