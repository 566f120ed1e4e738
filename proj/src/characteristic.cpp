#include "jumpspec/characteristic.hpp"

#include <algorithm>
#include <cmath>

#include "jumpspec/parallel.hpp"
#include "quadrature.hpp"

namespace jumpspec {

namespace {

using detail::gl7;

double density_value(const Density& d, double x) {
  const auto it = std::upper_bound(d.breakpoints.begin(), d.breakpoints.end(), x);
  const auto idx = static_cast<std::size_t>(std::distance(d.breakpoints.begin(), it));
  if (idx == 0) return d.values.front();
  return d.values[std::min(idx - 1, d.values.size() - 1)];
}

// Vector-valued moment \int f dnu and \int |f| dnu (componentwise).
struct Moment {
  std::vector<cplx> value;
  std::vector<double> magnitude;
};

template <class F>
Moment vector_moment(const BoundaryMeasure& nu, std::span<const double> pieces, std::size_t dim, F&& f) {
  Moment out{std::vector<cplx>(dim), std::vector<double>(dim)};
  std::vector<cplx> buf(dim);
  for (const auto& a : nu.atoms) {
    f(a.x, std::span<cplx>(buf));
    for (std::size_t i = 0; i < dim; ++i) {
      out.value[i] += a.w * buf[i];
      out.magnitude[i] += a.w * std::abs(buf[i]);
    }
  }
  if (!nu.density) return out;
  const auto& rule = gl7();
  for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
    const double lo = pieces[p], hi = pieces[p + 1];
    if (!(hi > lo)) continue;
    const double rho = density_value(*nu.density, 0.5 * (lo + hi));
    if (rho == 0.0) continue;
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (std::size_t q = 0; q < 7; ++q) {
      f(mid + half * rule.x[q], std::span<cplx>(buf));
      const double wq = rho * half * rule.w[q];
      for (std::size_t i = 0; i < dim; ++i) {
        out.value[i] += wq * buf[i];
        out.magnitude[i] += wq * std::abs(buf[i]);
      }
    }
  }
  return out;
}

// lambda-derivative levels 0..order of m, and of Delta in cross-moment form.
struct Core {
  std::array<Matrix2, 3> m{};
  std::array<cplx, 3> cross{};
  std::array<double, 3> cross_scale{};
  bool has_cross = false;
};

Matrix2 assemble(const Moment& v0, const Moment& v1, std::span<const cplx> at1, std::size_t y1, std::size_t y2,
                 bool base) {
  Matrix2 m;
  m[0][0] = v0.value[y1] - (base ? 1.0 : 0.0);
  m[0][1] = v0.value[y2];
  m[1][0] = v1.value[y1] - at1[y1];
  m[1][1] = v1.value[y2] - at1[y2];
  return m;
}

Core core_integrated(const Problem& problem, cplx lambda, int order, bool cross, const ToleranceSettings& tol) {
  const ShootingLayout layout{std::max(order, 1), cross, false};
  const auto traj = shoot(problem, lambda, layout, tol);
  const std::size_t dim = layout.dim();
  auto f = [&traj](double x, std::span<cplx> out) { traj.eval(x, out); };
  const auto v0 = vector_moment(problem.spec().nu0, traj.nodes(), dim, f);
  const auto v1 = vector_moment(problem.spec().nu1, traj.nodes(), dim, f);
  std::vector<cplx> at1(dim);
  traj.eval(1.0, at1);

  Core c;
  for (int k = 0; k <= layout.lambda_order; ++k) {
    c.m[k] = assemble(v0, v1, at1, layout.basis(k, 0), layout.basis(k, 2), k == 0);
  }
  if (cross) {
    c.has_cross = true;
    for (int k = 0; k <= order; ++k) {
      const std::size_t F = layout.cross(k, 0), G = layout.cross(k, 2), y2 = layout.basis(k, 2);
      c.cross[k] = v1.value[F] - v0.value[G] - at1[F] - v1.value[y2] + at1[y2];
      c.cross_scale[k] =
          v1.magnitude[F] + v0.magnitude[G] + std::abs(at1[F]) + v1.magnitude[y2] + std::abs(at1[y2]);
    }
  }
  return c;
}

Core core_closed(const Problem& problem, cplx lambda, int order) {
  const double b0 = problem.spec().b0.value, b1 = problem.spec().b1.value;
  const int levels = std::max(order, 1);
  const std::size_t dim = 4 * static_cast<std::size_t>(levels + 1);
  auto f = [&](double x, std::span<cplx> out) {
    const auto l = closed_form_levels(b0, b1, lambda, x, levels);
    for (int k = 0; k <= levels; ++k)
      for (int j = 0; j < 4; ++j) out[4 * k + j] = l[k][j];
  };
  const double beta = -b1 / (2.0 * b0);
  const auto pieces = problem.atoms_only() ? std::vector<double>{} : closed_form_mesh(problem, lambda);
  const auto v0 = vector_moment(problem.spec().nu0, pieces, dim, f);
  const auto v1 = vector_moment(problem.spec().nu1, pieces, dim, f);
  std::vector<cplx> at1(dim);
  f(1.0, at1);

  Core c;
  for (int k = 0; k <= levels; ++k) c.m[k] = assemble(v0, v1, at1, 4 * k, 4 * k + 2, k == 0);
  if (!problem.atoms_only()) return c;

  // Constant coefficients: K(s,t) = W(s) y2(t - s) with W(s) = exp(2 beta s).
  std::vector<Atom> mu0{{0.0, -1.0}}, mu1{{1.0, -1.0}};
  for (const auto& a : problem.spec().nu0.atoms) mu0.push_back(a);
  for (const auto& a : problem.spec().nu1.atoms) mu1.push_back(a);
  c.has_cross = true;
  for (const auto& s : mu0) {
    for (const auto& t : mu1) {
      if (s.x == t.x) continue;
      const double sign = s.x < t.x ? 1.0 : -1.0;
      const double lo = std::min(s.x, t.x), gap = std::abs(t.x - s.x);
      const auto l = closed_form_levels(b0, b1, lambda, gap, order);
      const double weight = sign * s.w * t.w * std::exp(2.0 * beta * lo);
      for (int k = 0; k <= order; ++k) {
        const cplx term = weight * l[k][2];
        c.cross[k] += term;
        c.cross_scale[k] += std::abs(term);
      }
    }
  }
  return c;
}

Core evaluate_core(const Problem& problem, cplx lambda, int order, bool cross, const ToleranceSettings& tol) {
  if (uses_closed_form(problem, tol)) return core_closed(problem, lambda, order);
  return core_integrated(problem, lambda, order, cross, tol);
}

// d^k/dlambda^k det m by the Leibniz rule, with the sum of term magnitudes.
std::pair<cplx, double> det_level(const std::array<Matrix2, 3>& m, int k) {
  static constexpr std::array<std::array<double, 3>, 3> binom{{{1, 0, 0}, {1, 1, 0}, {1, 2, 1}}};
  cplx v = 0.0;
  double s = 0.0;
  for (int i = 0; i <= k; ++i) {
    const int j = k - i;
    const double c = binom[k][i];
    const cplx p = c * m[i][0][0] * m[j][1][1];
    const cplx q = c * m[i][0][1] * m[j][1][0];
    v += p - q;
    s += std::abs(p) + std::abs(q);
  }
  return {v, s};
}

}  // namespace

bool uses_closed_form(const Problem& problem, const ToleranceSettings& tol) {
  switch (tol.route) {
    case BasisRoute::integrate:
      return false;
    case BasisRoute::closed_form:
      if (!problem.constant_coefficients()) {
        throw PreconditionError("closed-form route requires constant coefficients");
      }
      return true;
    case BasisRoute::automatic:
      break;
  }
  return problem.constant_coefficients() && problem.atoms_only();
}

cplx measure_moment(const FundamentalBasis& basis, const BoundaryMeasure& measure, MomentSelector which) {
  const auto& traj = basis.trajectory();
  std::size_t idx = 0;
  switch (which) {
    case MomentSelector::y1: idx = 0; break;
    case MomentSelector::y2: idx = 2; break;
    case MomentSelector::y1_dlambda: idx = 4; break;
    case MomentSelector::y2_dlambda: idx = 6; break;
  }
  if (idx >= traj.dim()) throw PreconditionError("measure_moment: basis lacks lambda-derivative components");
  auto f = [&traj, idx](double x, std::span<cplx> out) { out[0] = traj.eval_component(x, idx); };
  return vector_moment(measure, basis.mesh(), 1, f).value[0];
}

CharMatrix char_matrix(const Problem& problem, cplx lambda, const ToleranceSettings& tol) {
  const auto c = evaluate_core(problem, lambda, 1, false, tol);
  return {lambda, c.m[0], c.m[1]};
}

DeltaDerivatives delta_derivatives(const Problem& problem, cplx lambda, int order, const ToleranceSettings& tol) {
  if (order < 0 || order > 2) throw PreconditionError("delta_derivatives: order must be 0, 1 or 2");
  const auto c = evaluate_core(problem, lambda, order, true, tol);
  DeltaDerivatives d;
  d.order = order;
  for (int k = 0; k <= order; ++k) {
    const auto [v, s] = det_level(c.m, k);
    if (c.has_cross && c.cross_scale[k] < s) {
      d.value[k] = c.cross[k];
      d.scale[k] = c.cross_scale[k];
    } else {
      d.value[k] = v;
      d.scale[k] = s;
    }
  }
  return d;
}

cplx delta(const Problem& problem, cplx lambda, const ToleranceSettings& tol) {
  return delta_derivatives(problem, lambda, 0, tol).value[0];
}

std::pair<cplx, cplx> delta_with_prime(const Problem& problem, cplx lambda, const ToleranceSettings& tol) {
  const auto d = delta_derivatives(problem, lambda, 1, tol);
  return {d.value[0], d.value[1]};
}

cplx GridSample::lambda_at(std::size_t i, std::size_t j) const noexcept {
  const auto& r = rectangle;
  const double re = i + 1 == nx ? r.re_max : r.re_min + r.width() * double(i) / double(nx - 1);
  const double im = j + 1 == ny ? r.im_max : r.im_min + r.height() * double(j) / double(ny - 1);
  return {re, im};
}

GridSample delta_grid(const Problem& problem, const ContourRegion& region, std::size_t nx, std::size_t ny,
                      const ToleranceSettings& tol) {
  if (nx < 2 || ny < 2) throw PreconditionError("delta_grid: nx and ny must be at least 2");
  if (!region.valid()) throw PreconditionError("delta_grid: region bounds must be finite and well ordered");
  GridSample g{region, nx, ny, std::vector<cplx>(nx * ny)};
  parallel_for(nx * ny, tol.threads, [&](std::size_t n) {
    g.values[n] = delta(problem, g.lambda_at(n % nx, n / nx), tol);
  });
  return g;
}

}  // namespace jumpspec
