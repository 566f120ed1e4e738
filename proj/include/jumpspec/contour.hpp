#pragma once

// Argument-principle integrals (1/2 pi i) \oint (z - anchor)^k f'/f dz for an
// entire f, k = 0, 1, 2. k = 0 counts zeros with multiplicity; k = 1, 2 give
// the power sums that locate a cluster and measure its spread.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <utility>

#include "jumpspec/region.hpp"

namespace jumpspec {

using ValueFunction = std::function<std::complex<double>(std::complex<double>)>;
/// Returns (f(z), f'(z)).
using ValueDerivativeFunction =
    std::function<std::pair<std::complex<double>, std::complex<double>>(std::complex<double>)>;

struct ContourSettings {
  double integer_tolerance = 1e-3;    ///< accepted |winding - round(winding)|
  double winding_target = 1e-4;       ///< absolute error target on the winding number
  std::size_t initial_segments = 8;   ///< per rectangle edge
  std::size_t max_evaluations = 40000;
  std::size_t clearance_samples = 33;  ///< per edge
  double clearance_ratio = 1e-6;       ///< min |f| must exceed this times the median
  int max_perturbations = 8;
};

struct ContourIntegral {
  std::complex<double> winding;
  std::complex<double> anchor;
  std::array<std::complex<double>, 2> moments{};  ///< k = 1, 2 about the anchor
  double error = 0.0;                             ///< estimated absolute error of the winding
  std::size_t evaluations = 0;

  int count() const noexcept;
  /// Distance of the winding from the nearest integer.
  double residual() const noexcept;
  /// Mean of the enclosed zeros; requires count() > 0.
  std::complex<double> centroid() const noexcept;
  /// Root-mean-square distance of the enclosed zeros from their mean.
  double spread() const noexcept;
};

/// Globally adaptive Gauss-Kronrod (7/15) over the rectangle boundary,
/// refining the segment with the largest error estimate. Throws ContourError
/// when f vanishes at a node and AccuracyError when the budget is exhausted.
ContourIntegral integrate_rectangle(const ValueDerivativeFunction& f, const ContourRegion& region,
                                    const ContourSettings& settings = {});

/// Trapezoidal rule with n equispaced nodes on the circle |z - center| = radius,
/// spectrally accurate for periodic analytic integrands. The anchor is the center.
ContourIntegral integrate_circle(const ValueDerivativeFunction& f, std::complex<double> center, double radius,
                                 std::size_t n);

struct Clearance {
  double min_abs = 0.0;
  double median_abs = 0.0;
  bool clear = false;
};

/// Samples |f| at `samples` equispaced points (ends included) on each segment.
/// Clear when every segment has min |f| above ratio times its own median;
/// the result describes the segment with the smallest min/median.
Clearance polyline_clearance(const ValueFunction& f,
                             std::initializer_list<std::pair<std::complex<double>, std::complex<double>>> segments,
                             const ContourSettings& settings);
Clearance edge_clearance(const ValueFunction& f, const ContourRegion& region, const ContourSettings& settings);

/// k-th region of the perturbation sequence: the rectangle dilated about its
/// center by 1 + 2^-k c_k, with c_k in [0.005, 0.015) drawn from the golden-ratio sequence.
ContourRegion perturbed_region(const ContourRegion& region, int attempt);

struct ZeroCount {
  int count = 0;
  ContourRegion region;  ///< the rectangle actually integrated over
  ContourIntegral integral;
  int perturbations = 0;
};

/// Clearance check, then the boundary integral; on insufficient clearance or
/// an inaccurate integral the region is perturbed and retried.
ZeroCount count_in_region(const ValueFunction& value, const ValueDerivativeFunction& f, const ContourRegion& region,
                          const ContourSettings& settings = {});

}  // namespace jumpspec
