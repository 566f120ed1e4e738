#pragma once

// The characteristic matrix
//
//   m = [ \int y1 dnu0 - 1        \int y2 dnu0        ]
//       [ \int y1 dnu1 - y1(1)    \int y2 dnu1 - y2(1) ]
//
// and Delta = det m, whose zeros are exactly the eigenvalues.
//
// det m cancels badly where the fundamental solutions grow exponentially
// (Re lambda << 0). Delta is then evaluated in the equivalent form
//
//   Delta = \int\int K(s,t) dmu0(s) dmu1(t),  mu0 = nu0 - delta_0,  mu1 = nu1 - delta_1,
//   K(s,t) = y1(s) y2(t) - y2(s) y1(t),
//
// whose terms are bounded by the size of Delta itself. Each derivative order
// takes whichever of the two forms has the smaller rounding bound.

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "jumpspec/ode.hpp"
#include "jumpspec/problem.hpp"
#include "jumpspec/region.hpp"

namespace jumpspec {

enum class MomentSelector { y1, y2, y1_dlambda, y2_dlambda };

/// \int f dnu for f chosen by `which`: atoms exactly, the density part by
/// 7-point Gauss-Legendre on every accepted step of the basis.
cplx measure_moment(const FundamentalBasis& basis, const BoundaryMeasure& measure, MomentSelector which);

using Matrix2 = std::array<std::array<cplx, 2>, 2>;

struct CharMatrix {
  cplx lambda;
  Matrix2 m{};
  Matrix2 m_prime{};

  cplx det() const noexcept { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  cplx det_prime() const noexcept {
    return m_prime[0][0] * m[1][1] + m[0][0] * m_prime[1][1] - m_prime[0][1] * m[1][0] -
           m[0][1] * m_prime[1][0];
  }
};

CharMatrix char_matrix(const Problem& problem, cplx lambda, const ToleranceSettings& tol = {});

/// Delta and its lambda-derivatives up to `order` (at most 2).
struct DeltaDerivatives {
  std::array<cplx, 3> value{};
  /// Sum of the magnitudes of the terms combined into each value; the
  /// rounding error is a small multiple of tolerance times this.
  std::array<double, 3> scale{};
  int order = 0;
};

DeltaDerivatives delta_derivatives(const Problem& problem, cplx lambda, int order,
                                   const ToleranceSettings& tol = {});

cplx delta(const Problem& problem, cplx lambda, const ToleranceSettings& tol = {});
std::pair<cplx, cplx> delta_with_prime(const Problem& problem, cplx lambda, const ToleranceSettings& tol = {});

/// True when `tol.route` resolves to the constant-coefficient closed form for this problem.
bool uses_closed_form(const Problem& problem, const ToleranceSettings& tol);

struct GridSample {
  ContourRegion rectangle;
  std::size_t nx = 0;
  std::size_t ny = 0;
  /// Row-major: values[j * nx + i] at lambda_at(i, j).
  std::vector<cplx> values;

  cplx lambda_at(std::size_t i, std::size_t j) const noexcept;
};

/// Delta on the regular nx x ny grid spanning the rectangle, corners included.
GridSample delta_grid(const Problem& problem, const ContourRegion& region, std::size_t nx, std::size_t ny,
                      const ToleranceSettings& tol = {});

}  // namespace jumpspec
