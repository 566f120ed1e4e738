#include "jumpspec/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jumpspec/characteristic.hpp"
#include "quadrature.hpp"

namespace jumpspec {

using detail::gl7;

void SampledFunction::check() const {
  if (nodes.size() < 2) throw PreconditionError("sampled function needs at least two nodes");
  if (nodes.size() != values.size()) throw PreconditionError("sampled function: node and value counts differ");
  if (nodes.front() != 0.0 || nodes.back() != 1.0) {
    throw PreconditionError("sampled function nodes must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) throw PreconditionError("sampled function nodes must be strictly increasing");
  }
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw PreconditionError("sampled function values must be finite");
    }
  }
}

SampledFunction SampledFunction::sample(std::span<const double> nodes, const std::function<cplx(double)>& f) {
  SampledFunction s;
  s.nodes.assign(nodes.begin(), nodes.end());
  s.values.reserve(nodes.size());
  for (double x : nodes) s.values.push_back(f(x));
  return s;
}

SampledFunction SampledFunction::uniform(std::size_t n, const std::function<cplx(double)>& f) {
  const auto x = uniform_nodes(n);
  return sample(x, f);
}

SampledFunction SampledFunction::constant(cplx c, std::size_t n) {
  return uniform(n, [c](double) { return c; });
}

std::vector<double> uniform_nodes(std::size_t n) {
  if (n < 2) throw PreconditionError("uniform_nodes: need at least two nodes");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = double(i) / double(n - 1);
  x.back() = 1.0;
  return x;
}

// --- spline -------------------------------------------------------------

CubicSpline::CubicSpline(const SampledFunction& f) : x_(f.nodes), y_(f.values), m_(f.nodes.size()) {
  f.check();
  const std::size_t n = x_.size();
  if (n == 2) return;
  std::vector<double> h(n - 1);
  std::vector<cplx> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    d[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  if (n == 3) {
    const cplx c = 2.0 * (d[1] - d[0]) / (h[0] + h[1]);
    m_.assign(3, c);
    return;
  }

  // Tridiagonal system in M_1..M_{n-2} after eliminating M_0 and M_{n-1}
  // with the not-a-knot conditions.
  const std::size_t k = n - 2;
  std::vector<double> lo(k), di(k), up(k);
  std::vector<cplx> r(k);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t i = j + 1;
    lo[j] = h[i - 1];
    di[j] = 2.0 * (h[i - 1] + h[i]);
    up[j] = h[i];
    r[j] = 6.0 * (d[i] - d[i - 1]);
  }
  di[0] += h[0] * (h[0] + h[1]) / h[1];
  up[0] -= h[0] * h[0] / h[1];
  const double ha = h[n - 3], hb = h[n - 2];
  di[k - 1] += hb * (ha + hb) / ha;
  lo[k - 1] -= hb * hb / ha;

  for (std::size_t j = 1; j < k; ++j) {
    const double w = lo[j] / di[j - 1];
    di[j] -= w * up[j - 1];
    r[j] -= w * r[j - 1];
  }
  m_[k] = r[k - 1] / di[k - 1];
  for (std::size_t j = k - 1; j-- > 0;) m_[j + 1] = (r[j] - up[j] * m_[j + 2]) / di[j];

  m_[0] = ((h[0] + h[1]) * m_[1] - h[0] * m_[2]) / h[1];
  m_[n - 1] = ((ha + hb) * m_[n - 2] - hb * m_[n - 3]) / ha;
}

std::size_t CubicSpline::locate(double x) const {
  if (x < x_.front() || x > x_.back()) throw DomainError("spline evaluated outside [0,1]");
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const auto i = static_cast<std::size_t>(std::distance(x_.begin(), it));
  return std::min(i == 0 ? 0 : i - 1, x_.size() - 2);
}

cplx CubicSpline::operator()(double x) const {
  const std::size_t i = locate(x);
  const double h = x_[i + 1] - x_[i], t = x - x_[i];
  const cplx b = (y_[i + 1] - y_[i]) / h - h * (2.0 * m_[i] + m_[i + 1]) / 6.0;
  const cplx d = (m_[i + 1] - m_[i]) / (6.0 * h);
  return y_[i] + t * (b + t * (0.5 * m_[i] + t * d));
}

cplx CubicSpline::derivative(double x) const {
  const std::size_t i = locate(x);
  const double h = x_[i + 1] - x_[i], t = x - x_[i];
  const cplx b = (y_[i + 1] - y_[i]) / h - h * (2.0 * m_[i] + m_[i + 1]) / 6.0;
  const cplx d = (m_[i + 1] - m_[i]) / (6.0 * h);
  return b + t * (m_[i] + 3.0 * t * d);
}

cplx CubicSpline::second_derivative(double x) const {
  const std::size_t i = locate(x);
  const double h = x_[i + 1] - x_[i], t = x - x_[i];
  return m_[i] + (m_[i + 1] - m_[i]) * (t / h);
}

// --- resolvents ---------------------------------------------------------

namespace {

struct BasisValue {
  cplx y1, y2, w;
};

class Basis {
 public:
  Basis(const Problem& problem, cplx lambda, const ToleranceSettings& tol) {
    closed_ = tol.route == BasisRoute::automatic ? problem.constant_coefficients()
                                                 : uses_closed_form(problem, tol);
    if (closed_) {
      b0_ = problem.spec().b0.value;
      b1_ = problem.spec().b1.value;
      lambda_ = lambda;
      mesh_ = closed_form_mesh(problem, lambda);
    } else {
      traj_ = shoot(problem, lambda, ShootingLayout{0, false, true}, tol);
      const auto n = traj_.nodes();
      mesh_.assign(n.begin(), n.end());
    }
  }

  BasisValue operator()(double x) const {
    if (closed_) {
      const auto l = closed_form_levels(b0_, b1_, lambda_, x, 0);
      return {l[0][0], l[0][2], std::exp(-b1_ / b0_ * x)};
    }
    cplx u[5];
    traj_.eval(x, u);
    return {u[0], u[2], u[4]};
  }

  const std::vector<double>& mesh() const noexcept { return mesh_; }

 private:
  bool closed_ = false;
  double b0_ = 0.0, b1_ = 0.0;
  cplx lambda_;
  DenseTrajectory traj_;
  std::vector<double> mesh_;
};

std::vector<double> union_mesh(const Problem& problem, const Basis& basis, const SampledFunction& f,
                               std::span<const double> output) {
  std::vector<double> m(basis.mesh());
  m.insert(m.end(), problem.mesh().begin(), problem.mesh().end());
  m.insert(m.end(), f.nodes.begin(), f.nodes.end());
  m.insert(m.end(), output.begin(), output.end());
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  return m;
}

// Cumulative A and B on the union mesh; tilde(x) anywhere in [0,1].
class Volterra {
 public:
  Volterra(const Problem& problem, cplx lambda, const SampledFunction& f, std::span<const double> output,
           const ToleranceSettings& tol)
      : problem_(problem), basis_(problem, lambda, tol), f_(f) {
    mesh_ = union_mesh(problem, basis_, f, output);
    a_.assign(mesh_.size(), 0.0);
    b_.assign(mesh_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < mesh_.size(); ++i) {
      const auto [da, db] = partial(mesh_[i], mesh_[i + 1]);
      a_[i + 1] = a_[i] + da;
      b_[i + 1] = b_[i] + db;
    }
  }

  cplx tilde(double x) const {
    const std::size_t i = interval(x);
    cplx a = a_[i], b = b_[i];
    if (x > mesh_[i]) {
      const auto [da, db] = partial(mesh_[i], x);
      a += da;
      b += db;
    }
    const auto v = basis_(x);
    return v.y2 * b - v.y1 * a;
  }

  BasisValue basis(double x) const { return basis_(x); }
  std::span<const double> mesh() const noexcept { return mesh_; }

  /// \int g dnu for g evaluated pointwise; densities are integrated on the union mesh.
  template <class G>
  auto moment(const BoundaryMeasure& nu, int which, G&& g) const {
    decltype(g(0.0)) sum{};
    for (const auto& at : nu.atoms) sum += at.w * g(at.x);
    if (!nu.density) return sum;
    const auto& rule = gl7();
    for (std::size_t i = 0; i + 1 < mesh_.size(); ++i) {
      const double lo = mesh_[i], hi = mesh_[i + 1];
      const auto& seg = segment(0.5 * (lo + hi));
      const double rho = which == 0 ? seg.rho0 : seg.rho1;
      if (rho == 0.0) continue;
      const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
      for (std::size_t q = 0; q < 7; ++q) sum += rho * half * rule.w[q] * g(mid + half * rule.x[q]);
    }
    return sum;
  }

 private:
  const Segment& segment(double x) const {
    const auto mesh = problem_.mesh();
    const auto it = std::upper_bound(mesh.begin(), mesh.end(), x);
    auto i = static_cast<std::size_t>(std::distance(mesh.begin(), it));
    i = std::min(i == 0 ? 0 : i - 1, problem_.segments().size() - 1);
    return problem_.segments()[i];
  }

  std::size_t interval(double x) const {
    const auto it = std::upper_bound(mesh_.begin(), mesh_.end(), x);
    const auto i = static_cast<std::size_t>(std::distance(mesh_.begin(), it));
    return std::min(i == 0 ? 0 : i - 1, mesh_.size() - 1);
  }

  std::pair<cplx, cplx> partial(double lo, double hi) const {
    const auto& rule = gl7();
    const auto& seg = segment(0.5 * (lo + hi));
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    cplx da = 0.0, db = 0.0;
    for (std::size_t q = 0; q < 7; ++q) {
      const double t = mid + half * rule.x[q];
      const auto v = basis_(t);
      const cplx phi = f_(t) / (seg.b0(t) * v.w);
      da += rule.w[q] * v.y2 * phi;
      db += rule.w[q] * v.y1 * phi;
    }
    return {half * da, half * db};
  }

  const Problem& problem_;
  Basis basis_;
  CubicSpline f_;
  std::vector<double> mesh_;
  std::vector<cplx> a_, b_;
};

std::span<const double> output_nodes(const SampledFunction& f, std::span<const double> output) {
  if (output.empty()) return f.nodes;
  for (std::size_t i = 0; i < output.size(); ++i) {
    if (!(output[i] >= 0.0 && output[i] <= 1.0)) throw DomainError("output nodes must lie in [0,1]");
    if (i > 0 && !(output[i] > output[i - 1])) throw PreconditionError("output nodes must be strictly increasing");
  }
  return output;
}

struct Dirichlet {
  cplx tilde1, y21;
};

Dirichlet dirichlet_data(const Volterra& v) {
  double scale = 0.0;
  for (double x : v.mesh()) scale = std::max(scale, std::abs(v.basis(x).y2));
  const cplx y21 = v.basis(1.0).y2;
  if (!(std::abs(y21) > kSingularityRatio * scale)) {
    std::ostringstream os;
    os << "lambda is too close to a Dirichlet eigenvalue (|y2(1)| = " << std::abs(y21) << ")";
    throw NearSingularityError(os.str(), std::abs(y21));
  }
  return {v.tilde(1.0), y21};
}

cplx dirichlet_at(const Volterra& v, const Dirichlet& d, double x) {
  return v.tilde(x) - v.basis(x).y2 * d.tilde1 / d.y21;
}

}  // namespace

SampledFunction tilde_resolvent_apply(const Problem& problem, cplx lambda, const SampledFunction& f,
                                      const ToleranceSettings& tol, std::span<const double> output) {
  f.check();
  const auto out = output_nodes(f, output);
  const Volterra v(problem, lambda, f, out, tol);
  return SampledFunction::sample(out, [&v](double x) { return v.tilde(x); });
}

SampledFunction green_dirichlet_apply(const Problem& problem, cplx lambda, const SampledFunction& f,
                                      const ToleranceSettings& tol, std::span<const double> output) {
  f.check();
  const auto out = output_nodes(f, output);
  const Volterra v(problem, lambda, f, out, tol);
  const auto d = dirichlet_data(v);
  return SampledFunction::sample(out, [&](double x) {
    return x == 0.0 || x == 1.0 ? cplx(0.0) : dirichlet_at(v, d, x);
  });
}

SampledFunction resolvent_apply(const Problem& problem, cplx lambda, const SampledFunction& f,
                                const ToleranceSettings& tol, std::span<const double> output) {
  f.check();
  const auto out = output_nodes(f, output);
  const Volterra v(problem, lambda, f, out, tol);
  const auto d = dirichlet_data(v);

  const auto& spec = problem.spec();
  auto y1 = [&v](double x) { return v.basis(x).y1; };
  auto y2 = [&v](double x) { return v.basis(x).y2; };
  auto ud = [&](double x) { return dirichlet_at(v, d, x); };
  const auto at1 = v.basis(1.0);
  const cplx n01 = v.moment(spec.nu0, 0, y1), n02 = v.moment(spec.nu0, 0, y2);
  const cplx n11 = v.moment(spec.nu1, 1, y1), n12 = v.moment(spec.nu1, 1, y2);
  const cplx m11 = n01 - 1.0;
  const cplx m12 = n02;
  const cplx m21 = n11 - at1.y1;
  const cplx m22 = n12 - at1.y2;
  const cplx delta = m11 * m22 - m12 * m21;
  // magnitude sums of the terms in each row
  const double scale = (std::abs(n01) + 1.0 + std::abs(n02)) *
                       (std::abs(n11) + std::abs(at1.y1) + std::abs(n12) + std::abs(at1.y2));
  if (!(std::abs(delta) > kSingularityRatio * scale)) {
    std::ostringstream os;
    os << "lambda is too close to an eigenvalue (|Delta| = " << std::abs(delta) << ")";
    throw NearSingularityError(os.str(), std::abs(delta));
  }
  const cplx alpha0 = v.moment(spec.nu0, 0, ud);
  const cplx alpha1 = v.moment(spec.nu1, 1, ud);
  // u = u_D + c1 y1 + c2 y2
  const cplx c1 = (m12 * alpha1 - m22 * alpha0) / delta;
  const cplx c2 = (m21 * alpha0 - m11 * alpha1) / delta;
  return SampledFunction::sample(out, [&](double x) {
    const auto b = v.basis(x);
    const cplx u_d = x == 0.0 || x == 1.0 ? cplx(0.0) : dirichlet_at(v, d, x);
    return u_d + c1 * b.y1 + c2 * b.y2;
  });
}

}  // namespace jumpspec
