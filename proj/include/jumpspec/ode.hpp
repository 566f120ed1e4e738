#pragma once

// Shooting for b0 y'' + b1 y' = lambda y at complex lambda.
//
// The fundamental solutions y1, y2 (y1(0) = y2'(0) = 1, y1'(0) = y2(0) = 0)
// are integrated together with their lambda-derivatives, which obey the
// variational equations b0 z'' + b1 z' = lambda z + k z_{k-1} with zero
// initial data. Integration uses an embedded Dormand-Prince 5(4) pair with
// its quartic continuous extension, restarting at every master-mesh node.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "jumpspec/problem.hpp"

namespace jumpspec {

enum class BasisRoute {
  automatic,    ///< closed form for constant coefficients with atom-only measures
  integrate,    ///< always shoot numerically
  closed_form,  ///< constant coefficients only
};

struct ToleranceSettings {
  double rtol = 1e-10;
  double atol = 1e-12;
  BasisRoute route = BasisRoute::automatic;
  unsigned threads = 0;  ///< 0 selects the hardware concurrency
};

inline constexpr double kMinStep = 1e-14;
inline constexpr std::size_t kMaxSteps = 2'000'000;

struct IntegratorStats {
  std::size_t steps = 0;
  std::size_t rejections = 0;
  std::size_t rhs_evaluations = 0;
};

/// Dense output of one integration over [0,1]: a quartic interpolant per
/// accepted step. Evaluation at a step boundary uses the step that starts
/// there, so state jumps applied at mesh nodes are right-continuous.
class DenseTrajectory {
 public:
  DenseTrajectory() = default;
  explicit DenseTrajectory(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t step_count() const noexcept { return x0_.size(); }
  /// Accepted-step mesh including 0 and 1. Contains every master-mesh node.
  std::span<const double> nodes() const noexcept { return nodes_; }

  void eval(double x, std::span<cplx> out) const;
  cplx eval_component(double x, std::size_t i) const;

  void append_step(double x0, double h, std::span<const cplx> y0, std::span<const cplx> ydiff,
                   std::span<const cplx> bspl, std::span<const cplx> c4, std::span<const cplx> c5);

 private:
  std::size_t locate(double x) const;

  std::size_t dim_ = 0;
  std::vector<double> x0_;
  std::vector<double> h_;
  std::vector<cplx> coef_;  // 5 * dim_ per step
  std::vector<double> nodes_;
};

using OdeRhs = std::function<void(std::size_t segment, double x, std::span<const cplx> u, std::span<cplx> du)>;
/// Applied at interior mesh node `node` (index into the mesh) before the next segment starts.
using OdeJump = std::function<void(std::size_t node, std::span<cplx> u)>;

/// Integrates u' = rhs(u) over [mesh.front(), mesh.back()], never stepping
/// across a mesh node. Throws StiffnessError when the step size underflows.
DenseTrajectory integrate_dense(std::span<const double> mesh, std::vector<cplx> u0, const OdeRhs& rhs,
                                const OdeJump& jump, const ToleranceSettings& tol,
                                IntegratorStats* stats = nullptr);

/// Component layout of the shooting system.
///
/// Basis block, for k = 0..lambda_order: d^k/dlambda^k of (y1, y1', y2, y2').
/// Cross block (optional), same k: (F, F', G, G') where
///   F(t) = \int_{s<t} K(s,t) dnu0(s),  G(t) = \int_{s<t} K(s,t) dnu1(s),
///   K(s,t) = y1(s) y2(t) - y2(s) y1(t).
/// F and G are forced by the measure densities and jump in F', G' at atoms.
/// The Wronskian W is carried as the last component when requested.
struct ShootingLayout {
  int lambda_order = 1;
  bool cross_moments = false;
  bool wronskian = false;

  std::size_t basis(int k, int comp) const noexcept { return 4 * static_cast<std::size_t>(k) + comp; }
  std::size_t cross(int k, int comp) const noexcept {
    return 4 * static_cast<std::size_t>(lambda_order + 1) + 4 * static_cast<std::size_t>(k) + comp;
  }
  bool has_wronskian() const noexcept { return wronskian || cross_moments; }
  std::size_t wronskian_index() const noexcept {
    return 4 * static_cast<std::size_t>(lambda_order + 1) * (cross_moments ? 2 : 1);
  }
  std::size_t dim() const noexcept { return wronskian_index() + (has_wronskian() ? 1 : 0); }
};

DenseTrajectory shoot(const Problem& problem, cplx lambda, const ShootingLayout& layout,
                      const ToleranceSettings& tol, IntegratorStats* stats = nullptr);

/// The 8 components of the fundamental system at one x.
struct BasisPoint {
  cplx y1, y1_prime, y2, y2_prime;
  cplx y1_dlambda, y1_prime_dlambda, y2_dlambda, y2_prime_dlambda;
};

class FundamentalBasis {
 public:
  FundamentalBasis(cplx lambda, DenseTrajectory trajectory, IntegratorStats stats)
      : lambda_(lambda), trajectory_(std::move(trajectory)), stats_(stats) {}

  cplx lambda() const noexcept { return lambda_; }
  std::span<const double> mesh() const noexcept { return trajectory_.nodes(); }
  const IntegratorStats& stats() const noexcept { return stats_; }
  const DenseTrajectory& trajectory() const noexcept { return trajectory_; }

 private:
  cplx lambda_;
  DenseTrajectory trajectory_;
  IntegratorStats stats_;
};

FundamentalBasis integrate_basis(const Problem& problem, cplx lambda, const ToleranceSettings& tol = {});

/// Dense-output evaluation; throws DomainError outside [0,1].
BasisPoint eval_basis(const FundamentalBasis& basis, double x);

/// z-derivatives (orders 0..2) of C(z,x) = cos(sqrt(z) x) and
/// S(z,x) = sin(sqrt(z) x)/sqrt(z). Both are entire in z; a power series is
/// used where |z| x^2 <= 4.
struct TrigLevels {
  std::array<cplx, 3> c{};
  std::array<cplx, 3> s{};
};
TrigLevels trig_levels(cplx z, double x, int order);

/// d^k/dlambda^k of (y1, y1', y2, y2') for constant b0 < 0, b1, k = 0..order,
/// from v1 = cos(mu x), v2 = sin(mu x)/mu and y = exp(-b1 x / 2 b0) v.
using ClosedFormLevels = std::array<std::array<cplx, 4>, 3>;
ClosedFormLevels closed_form_levels(double b0, double b1, cplx lambda, double x, int order);

/// Master mesh subdivided so that no piece is longer than 0.5 / rate, where
/// rate bounds |sqrt(-lambda/b0 - q)| and |b1/(2 b0)| of the closed form.
std::vector<double> closed_form_mesh(const Problem& problem, cplx lambda);

/// Exact constant-coefficient fundamental system; throws DomainError for b0 >= 0.
BasisPoint closed_form_basis(double b0, double b1, cplx lambda, double x);

}  // namespace jumpspec
