#include "jumpspec/ode.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace jumpspec {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double scaled_norm(std::span<const cplx> v, std::span<const cplx> u, const ToleranceSettings& tol) {
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]) / (tol.atol + tol.rtol * std::abs(u[i])));
  return m;
}

}  // namespace

std::size_t DenseTrajectory::locate(double x) const {
  const auto it = std::upper_bound(x0_.begin(), x0_.end(), x);
  if (it == x0_.begin()) return 0;
  return static_cast<std::size_t>(std::distance(x0_.begin(), it)) - 1;
}

void DenseTrajectory::eval(double x, std::span<cplx> out) const {
  if (x0_.empty()) throw PreconditionError("DenseTrajectory::eval: empty trajectory");
  const std::size_t i = locate(x);
  const double s = (x - x0_[i]) / h_[i], s1 = 1.0 - s;
  const cplx* r = coef_.data() + 5 * dim_ * i;
  for (std::size_t k = 0; k < dim_; ++k) {
    out[k] = r[k] + s * (r[dim_ + k] + s1 * (r[2 * dim_ + k] + s * (r[3 * dim_ + k] + s1 * r[4 * dim_ + k])));
  }
}

cplx DenseTrajectory::eval_component(double x, std::size_t k) const {
  if (x0_.empty()) throw PreconditionError("DenseTrajectory::eval: empty trajectory");
  const std::size_t i = locate(x);
  const double s = (x - x0_[i]) / h_[i], s1 = 1.0 - s;
  const cplx* r = coef_.data() + 5 * dim_ * i;
  return r[k] + s * (r[dim_ + k] + s1 * (r[2 * dim_ + k] + s * (r[3 * dim_ + k] + s1 * r[4 * dim_ + k])));
}

void DenseTrajectory::append_step(double x0, double h, std::span<const cplx> y0, std::span<const cplx> ydiff,
                                  std::span<const cplx> bspl, std::span<const cplx> c4,
                                  std::span<const cplx> c5) {
  if (nodes_.empty()) nodes_.push_back(x0);
  x0_.push_back(x0);
  h_.push_back(h);
  for (auto part : {y0, ydiff, bspl, c4, c5}) coef_.insert(coef_.end(), part.begin(), part.end());
  nodes_.push_back(x0 + h);
}

DenseTrajectory integrate_dense(std::span<const double> mesh, std::vector<cplx> u0, const OdeRhs& rhs,
                                const OdeJump& jump, const ToleranceSettings& tol, IntegratorStats* stats) {
  if (mesh.size() < 2) throw PreconditionError("integrate_dense: mesh needs two nodes");
  if (!(tol.rtol > 0.0) || !(tol.atol > 0.0)) throw PreconditionError("integrate_dense: tolerances must be positive");
  const std::size_t n = u0.size();
  DenseTrajectory traj(n);
  IntegratorStats local;

  std::vector<cplx> u = std::move(u0), unew(n), tmp(n), err(n);
  std::array<std::vector<cplx>, 7> k;
  for (auto& v : k) v.resize(n);
  std::vector<cplx> ydiff(n), bspl(n), r4(n), r5(n);

  double h = 0.0;
  for (std::size_t seg = 0; seg + 1 < mesh.size(); ++seg) {
    const double xa = mesh[seg], xb = mesh[seg + 1];
    if (seg > 0 && jump) jump(seg, u);
    auto f = [&](double x, std::span<const cplx> y, std::span<cplx> dy) {
      ++local.rhs_evaluations;
      rhs(seg, x, y, dy);
    };

    double x = xa;
    f(x, u, k[0]);
    if (h <= 0.0) {
      // Initial step from the scaled sizes of u and u'.
      const double d0 = scaled_norm(u, u, tol), d1n = scaled_norm(k[0], u, tol);
      h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
      h = std::min(h, 0.1);
    }
    h = std::min(h, xb - xa);
    bool last_rejected = false;

    while (x < xb) {
      if (local.steps + local.rejections > kMaxSteps) {
        throw StiffnessError("integrator: step budget exhausted at x = " + fmt(x), x);
      }
      bool final_step = false;
      const double h_proposed = h;
      if (x + 1.01 * h >= xb) {
        h = xb - x;
        final_step = true;
      }
      if (h < kMinStep) throw StiffnessError("integrator: step size underflow at x = " + fmt(x), x);

      for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + h * a21 * k[0][i];
      f(x + c2 * h, tmp, k[1]);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
      f(x + c3 * h, tmp, k[2]);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
      f(x + c4 * h, tmp, k[3]);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = u[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
      f(x + c5 * h, tmp, k[4]);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = u[i] + h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] + a65 * k[4][i]);
      const double xnew = final_step ? xb : x + h;
      f(xnew, tmp, k[5]);
      for (std::size_t i = 0; i < n; ++i)
        unew[i] = u[i] + h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] + a76 * k[5][i]);
      f(xnew, unew, k[6]);
      for (std::size_t i = 0; i < n; ++i)
        err[i] = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] + e7 * k[6][i]);

      double e = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double sc = tol.atol + tol.rtol * std::max(std::abs(u[i]), std::abs(unew[i]));
        e = std::max(e, std::abs(err[i]) / sc);
      }
      if (!std::isfinite(e)) e = 1e10;

      double fac = e == 0.0 ? 5.0 : 0.9 * std::pow(e, -0.2);
      fac = std::clamp(fac, 0.2, 5.0);
      if (e <= 1.0) {
        for (std::size_t i = 0; i < n; ++i) {
          ydiff[i] = unew[i] - u[i];
          bspl[i] = h * k[0][i] - ydiff[i];
          r4[i] = ydiff[i] - h * k[6][i] - bspl[i];
          r5[i] = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] + d6 * k[5][i] + d7 * k[6][i]);
        }
        traj.append_step(x, xnew - x, u, ydiff, bspl, r4, r5);
        ++local.steps;
        x = xnew;
        std::swap(u, unew);
        std::swap(k[0], k[6]);
        if (last_rejected) fac = std::min(fac, 1.0);
        last_rejected = false;
        h = final_step ? std::max(h * fac, h_proposed) : h * fac;
      } else {
        ++local.rejections;
        last_rejected = true;
        h *= fac;
      }
    }
  }
  if (stats) {
    stats->steps += local.steps;
    stats->rejections += local.rejections;
    stats->rhs_evaluations += local.rhs_evaluations;
  }
  return traj;
}

DenseTrajectory shoot(const Problem& problem, cplx lambda, const ShootingLayout& layout,
                      const ToleranceSettings& tol, IntegratorStats* stats) {
  if (layout.lambda_order < 0 || layout.lambda_order > 2) {
    throw PreconditionError("shoot: lambda_order must be 0, 1 or 2");
  }
  const int K = layout.lambda_order;
  const auto segs = problem.segments();
  const auto mesh = problem.mesh();
  const std::size_t wi = layout.wronskian_index();
  const bool with_w = layout.has_wronskian();

  std::vector<cplx> u0(layout.dim(), cplx{});
  u0[layout.basis(0, 0)] = 1.0;
  u0[layout.basis(0, 3)] = 1.0;
  if (with_w) u0[wi] = 1.0;

  auto rhs = [&](std::size_t seg, double x, std::span<const cplx> u, std::span<cplx> du) {
    const auto& s = segs[seg];
    const double b0 = s.b0(x), b1 = s.b1(x);
    const double ib0 = 1.0 / b0;
    auto pair = [&](std::size_t base, int k, std::size_t lower, cplx forcing) {
      const cplx z = u[base], zp = u[base + 1];
      cplx acc = lambda * z - b1 * zp;
      if (k > 0) acc += static_cast<double>(k) * u[lower];
      du[base] = zp;
      du[base + 1] = acc * ib0 + forcing;
    };
    for (int k = 0; k <= K; ++k) {
      for (int c : {0, 2}) {
        const std::size_t b = layout.basis(k, c);
        pair(b, k, k > 0 ? layout.basis(k - 1, c) : 0, 0.0);
      }
    }
    if (layout.cross_moments) {
      const cplx w = u[wi];
      for (int k = 0; k <= K; ++k) {
        const std::size_t bf = layout.cross(k, 0), bg = layout.cross(k, 2);
        pair(bf, k, k > 0 ? layout.cross(k - 1, 0) : 0, k == 0 ? w * s.rho0 : cplx{});
        pair(bg, k, k > 0 ? layout.cross(k - 1, 2) : 0, k == 0 ? w * s.rho1 : cplx{});
      }
    }
    if (with_w) du[wi] = -(b1 * ib0) * u[wi];
  };

  OdeJump jump;
  if (layout.cross_moments) {
    std::map<double, std::pair<double, double>> atoms;
    for (const auto& a : problem.spec().nu0.atoms) atoms[a.x].first += a.w;
    for (const auto& a : problem.spec().nu1.atoms) atoms[a.x].second += a.w;
    std::vector<std::pair<double, double>> at_node(mesh.size(), {0.0, 0.0});
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      if (const auto it = atoms.find(mesh[i]); it != atoms.end()) at_node[i] = it->second;
    }
    jump = [&layout, wi, at_node = std::move(at_node)](std::size_t node, std::span<cplx> u) {
      const auto [w0, w1] = at_node[node];
      u[layout.cross(0, 1)] += w0 * u[wi];
      u[layout.cross(0, 3)] += w1 * u[wi];
    };
  }
  return integrate_dense(mesh, std::move(u0), rhs, jump, tol, stats);
}

FundamentalBasis integrate_basis(const Problem& problem, cplx lambda, const ToleranceSettings& tol) {
  IntegratorStats stats;
  auto traj = shoot(problem, lambda, ShootingLayout{1, false, false}, tol, &stats);
  return FundamentalBasis(lambda, std::move(traj), stats);
}

BasisPoint eval_basis(const FundamentalBasis& basis, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("eval_basis: x = " + fmt(x) + " outside [0,1]");
  std::array<cplx, 8> v{};
  basis.trajectory().eval(x, std::span<cplx>(v.data(), basis.trajectory().dim() >= 8 ? 8 : 4));
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
}

}  // namespace jumpspec
