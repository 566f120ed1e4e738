#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace jumpspec {

/// Axis-aligned rectangle in the complex lambda-plane.
struct ContourRegion {
  double re_min = 0.0;
  double re_max = 1.0;
  double im_min = 0.0;
  double im_max = 1.0;

  bool valid() const noexcept {
    return std::isfinite(re_min) && std::isfinite(re_max) && std::isfinite(im_min) &&
           std::isfinite(im_max) && re_min < re_max && im_min < im_max;
  }
  double width() const noexcept { return re_max - re_min; }
  double height() const noexcept { return im_max - im_min; }
  double diameter() const noexcept { return std::hypot(width(), height()); }
  std::complex<double> center() const noexcept {
    return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)};
  }
  bool contains(std::complex<double> z) const noexcept {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
  /// Same center, half-sides scaled by `factor`.
  ContourRegion scaled(double factor) const noexcept {
    const auto c = center();
    const double hw = 0.5 * width() * factor, hh = 0.5 * height() * factor;
    return {c.real() - hw, c.real() + hw, c.imag() - hh, c.imag() + hh};
  }
  static ContourRegion square(std::complex<double> c, double half) noexcept {
    return {c.real() - half, c.real() + half, c.imag() - half, c.imag() + half};
  }
};

}  // namespace jumpspec
