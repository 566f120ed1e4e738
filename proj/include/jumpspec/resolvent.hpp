#pragma once

// Resolvents applied to sampled right-hand sides.
//
// With W = y1 y2' - y2 y1', phi = f / (b0 W), A(x) = \int_0^x y2 phi and
// B(x) = \int_0^x y1 phi:
//
//   tilde      u~  = y2 B - y1 A                  (u(0) = u'(0) = 0)
//   Dirichlet  u_D = u~ - y2 u~(1) / y2(1)        (u(0) = u(1) = 0)
//   full       u   = u_D + g0 \int u_D dnu0 + g1 \int u_D dnu1
//
// g0 = (m21 y2 - m22 y1) / Delta and g1 = (m12 y1 - m11 y2) / Delta, where m is
// the characteristic matrix. All integrals use 7-point Gauss-Legendre on the
// union of the basis mesh, the master mesh, the sample nodes and the output nodes.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "jumpspec/ode.hpp"
#include "jumpspec/problem.hpp"

namespace jumpspec {

inline constexpr std::size_t kDefaultSamples = 257;
inline constexpr double kSingularityRatio = 1e-10;

enum class Interpolation { piecewise_cubic };

struct SampledFunction {
  std::vector<double> nodes;  ///< strictly increasing, first 0, last 1
  std::vector<cplx> values;
  Interpolation interpolation = Interpolation::piecewise_cubic;

  /// Throws PreconditionError if the invariants fail.
  void check() const;

  static SampledFunction sample(std::span<const double> nodes, const std::function<cplx(double)>& f);
  static SampledFunction uniform(std::size_t n, const std::function<cplx(double)>& f);
  static SampledFunction constant(cplx c, std::size_t n = kDefaultSamples);
};

std::vector<double> uniform_nodes(std::size_t n);

/// Complex cubic spline with not-a-knot end conditions. Two nodes give the
/// chord, three the interpolating parabola.
class CubicSpline {
 public:
  explicit CubicSpline(const SampledFunction& f);

  cplx operator()(double x) const;
  cplx derivative(double x) const;
  cplx second_derivative(double x) const;

 private:
  std::size_t locate(double x) const;

  std::vector<double> x_;
  std::vector<cplx> y_;
  std::vector<cplx> m_;  // second derivatives at the nodes
};

/// Volterra resolvent; defined for every lambda.
SampledFunction tilde_resolvent_apply(const Problem& problem, cplx lambda, const SampledFunction& f,
                                      const ToleranceSettings& tol = {}, std::span<const double> output = {});

/// Dirichlet resolvent. Throws NearSingularityError when
/// |y2(1)| <= 1e-10 max|y2|.
SampledFunction green_dirichlet_apply(const Problem& problem, cplx lambda, const SampledFunction& f,
                                      const ToleranceSettings& tol = {}, std::span<const double> output = {});

/// Resolvent of the nonlocal problem. Throws NearSingularityError for a
/// Dirichlet singularity, and when |Delta| <= 1e-10 s0 s1 with the error
/// carrying |Delta|. s_i is the magnitude sum of the terms of row i of m:
/// s0 = |\int y1 dnu0| + 1 + |\int y2 dnu0|,
/// s1 = |\int y1 dnu1| + |y1(1)| + |\int y2 dnu1| + |y2(1)|.
SampledFunction resolvent_apply(const Problem& problem, cplx lambda, const SampledFunction& f,
                                const ToleranceSettings& tol = {}, std::span<const double> output = {});

}  // namespace jumpspec
