#include <algorithm>
#include <cmath>

#include "jumpspec/ode.hpp"

namespace jumpspec {

namespace {

constexpr double kSeriesRadius = 4.0;
constexpr int kSeriesTerms = 30;

TrigLevels trig_series(cplx z, double x, int order) {
  TrigLevels t;
  const double mx2 = -x * x;
  double a = 1.0, b = x;  // coefficients of z^n in C and S
  cplx zn = 1.0, zn1 = 0.0, zn2 = 0.0;  // z^n, z^(n-1), z^(n-2)
  for (int n = 0; n < kSeriesTerms; ++n) {
    t.c[0] += a * zn;
    t.s[0] += b * zn;
    if (order >= 1 && n >= 1) {
      t.c[1] += double(n) * a * zn1;
      t.s[1] += double(n) * b * zn1;
    }
    if (order >= 2 && n >= 2) {
      t.c[2] += double(n) * (n - 1) * a * zn2;
      t.s[2] += double(n) * (n - 1) * b * zn2;
    }
    zn2 = zn1;
    zn1 = zn;
    zn *= z;
    a *= mx2 / ((2.0 * n + 1) * (2.0 * n + 2));
    b *= mx2 / ((2.0 * n + 2) * (2.0 * n + 3));
  }
  return t;
}

}  // namespace

TrigLevels trig_levels(cplx z, double x, int order) {
  if (std::abs(z) * x * x <= kSeriesRadius) return trig_series(z, x, order);
  TrigLevels t;
  const cplx mu = std::sqrt(z);
  t.c[0] = std::cos(mu * x);
  t.s[0] = std::sin(mu * x) / mu;
  if (order >= 1) {
    t.c[1] = -0.5 * x * t.s[0];
    t.s[1] = (x * t.c[0] - t.s[0]) / (2.0 * z);
  }
  if (order >= 2) {
    t.c[2] = -0.5 * x * t.s[1];
    t.s[2] = (x * t.c[1] - 3.0 * t.s[1]) / (2.0 * z);
  }
  return t;
}

ClosedFormLevels closed_form_levels(double b0, double b1, cplx lambda, double x, int order) {
  if (!(b0 < 0.0)) throw DomainError("closed_form_levels: b0 must be negative");
  const double beta = -b1 / (2.0 * b0);
  const cplx z = -lambda / b0 - beta * beta;
  const double q = -1.0 / b0;  // dz/dlambda
  const auto t = trig_levels(z, x, order);
  const double e = std::exp(beta * x);
  const std::array<double, 3> qk{1.0, q, q * q};

  ClosedFormLevels out{};
  for (int k = 0; k <= order; ++k) {
    const cplx C = qk[k] * t.c[k], S = qk[k] * t.s[k];
    cplx y1p = (lambda / b0) * S;
    if (k >= 1) y1p += double(k) * qk[k - 1] * t.s[k - 1] / b0;
    out[k] = {e * (C - beta * S), e * y1p, e * S, e * (beta * S + C)};
  }
  return out;
}

std::vector<double> closed_form_mesh(const Problem& problem, cplx lambda) {
  const double b0 = problem.spec().b0.value, b1 = problem.spec().b1.value;
  const double beta = -b1 / (2.0 * b0);
  const double rate = std::max(std::abs(std::sqrt(-lambda / b0 - beta * beta)), std::abs(beta));
  std::vector<double> out;
  const auto mesh = problem.mesh();
  out.push_back(mesh.front());
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    const double a = mesh[i], b = mesh[i + 1];
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) * rate / 0.5)));
    for (std::size_t j = 1; j < n; ++j) out.push_back(a + (b - a) * double(j) / double(n));
    out.push_back(b);
  }
  return out;
}

BasisPoint closed_form_basis(double b0, double b1, cplx lambda, double x) {
  const auto l = closed_form_levels(b0, b1, lambda, x, 1);
  return {l[0][0], l[0][1], l[0][2], l[0][3], l[1][0], l[1][1], l[1][2], l[1][3]};
}

}  // namespace jumpspec
