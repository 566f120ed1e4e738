#include "jumpspec/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace jumpspec {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double horner(const std::vector<double>& c, double x) {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

bool finite_all(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
}

// Checks a breakpoint mesh spanning exactly [0,1]; returns false on violation.
bool check_mesh(const std::vector<double>& bp, const std::string& field,
                std::vector<Violation>& out) {
  if (bp.size() < 2) {
    out.push_back({field, "needs at least two breakpoints"});
    return false;
  }
  bool ok = true;
  if (!finite_all(bp)) {
    out.push_back({field, "breakpoints must be finite"});
    return false;
  }
  if (bp.front() != 0.0 || bp.back() != 1.0) {
    out.push_back({field, "breakpoints must span exactly [0,1]"});
    ok = false;
  }
  for (std::size_t i = 1; i < bp.size(); ++i) {
    if (!(bp[i] > bp[i - 1])) {
      out.push_back({field, "breakpoints must be strictly increasing"});
      ok = false;
      break;
    }
  }
  return ok;
}

// Maximum of a cubic on [a,b]: endpoints plus interior critical points.
double cubic_max(const std::vector<double>& c, double a, double b) {
  double m = std::max(horner(c, a), horner(c, b));
  std::array<double, 4> p{};
  std::copy(c.begin(), c.end(), p.begin());
  // derivative: p1 + 2 p2 x + 3 p3 x^2
  const double qa = 3.0 * p[3], qb = 2.0 * p[2], qc = p[1];
  auto consider = [&](double x) {
    if (x > a && x < b) m = std::max(m, horner(c, x));
  };
  if (qa == 0.0) {
    if (qb != 0.0) consider(-qc / qb);
  } else {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      consider((-qb + s) / (2.0 * qa));
      consider((-qb - s) / (2.0 * qa));
    }
  }
  return m;
}

void check_coefficient(const Coefficient& c, const std::string& name, bool is_b0, double floor,
                       std::vector<Violation>& out) {
  if (c.is_constant()) {
    if (!std::isfinite(c.value)) {
      out.push_back({name + ".value", "must be finite"});
      return;
    }
    if (is_b0 && c.value > -floor) out.push_back({name, "b0 must be <= -eps0 (eps0 = " + fmt(floor) + ")"});
    return;
  }
  bool ok = check_mesh(c.breakpoints, name + ".breakpoints", out);
  if (c.polys.size() + 1 != c.breakpoints.size()) {
    out.push_back({name + ".polys", "needs one polynomial per interval"});
    return;
  }
  for (std::size_t i = 0; i < c.polys.size(); ++i) {
    const auto& p = c.polys[i];
    const std::string f = name + ".polys[" + std::to_string(i) + "]";
    if (p.empty() || p.size() > kMaxPolynomialDegree + 1) {
      out.push_back({f, "degree must be between 0 and 3"});
      ok = false;
    } else if (!finite_all(p)) {
      out.push_back({f, "coefficients must be finite"});
      ok = false;
    }
  }
  if (!ok || !is_b0) return;
  for (std::size_t i = 0; i < c.polys.size(); ++i) {
    const double m = cubic_max(c.polys[i], c.breakpoints[i], c.breakpoints[i + 1]);
    if (m > -floor) {
      out.push_back({name + ".polys[" + std::to_string(i) + "]",
                     "b0 must be <= -eps0 (eps0 = " + fmt(floor) + "), max on interval is " + fmt(m)});
    }
  }
}

void check_measure(const BoundaryMeasure& nu, const std::string& name, std::vector<Violation>& out) {
  bool ok = true;
  for (std::size_t i = 0; i < nu.atoms.size(); ++i) {
    const auto& a = nu.atoms[i];
    const std::string f = name + ".atoms[" + std::to_string(i) + "]";
    if (!(a.x > 0.0 && a.x < 1.0)) {
      out.push_back({f + ".x", "atom location must lie strictly inside (0,1)"});
      ok = false;
    }
    if (!(a.w > 0.0) || !std::isfinite(a.w)) {
      out.push_back({f + ".w", "atom weight must be positive"});
      ok = false;
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (nu.atoms[j].x == a.x) {
        out.push_back({f + ".x", "atom locations must be pairwise distinct"});
        ok = false;
      }
    }
  }
  if (nu.density) {
    const auto& d = *nu.density;
    const std::string f = name + ".density";
    ok = check_mesh(d.breakpoints, f + ".breakpoints", out) && ok;
    if (d.values.size() + 1 != d.breakpoints.size()) {
      out.push_back({f + ".values", "needs one value per interval"});
      ok = false;
    } else {
      for (double v : d.values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
          out.push_back({f + ".values", "density values must be nonnegative"});
          ok = false;
          break;
        }
      }
    }
  }
  if (!ok) return;
  const double mass = nu.mass();
  if (std::abs(mass - 1.0) > kMassTolerance) {
    out.push_back({name, "measure mass " + fmt(mass) + " != 1"});
  }
}

const std::vector<double>& piece_for(const Coefficient& c, double mid) {
  const auto it = std::upper_bound(c.breakpoints.begin(), c.breakpoints.end(), mid);
  const auto idx = static_cast<std::size_t>(std::distance(c.breakpoints.begin(), it)) - 1;
  return c.polys[std::min(idx, c.polys.size() - 1)];
}

Cubic cubic_on(const Coefficient& c, double mid) {
  Cubic out;
  if (c.is_constant()) {
    out.c[0] = c.value;
    return out;
  }
  const auto& p = piece_for(c, mid);
  std::copy(p.begin(), p.end(), out.c.begin());
  return out;
}

double density_on(const BoundaryMeasure& nu, double mid) {
  if (!nu.density) return 0.0;
  const auto& d = *nu.density;
  const auto it = std::upper_bound(d.breakpoints.begin(), d.breakpoints.end(), mid);
  const auto idx = static_cast<std::size_t>(std::distance(d.breakpoints.begin(), it)) - 1;
  return d.values[std::min(idx, d.values.size() - 1)];
}

}  // namespace

Coefficient Coefficient::constant(double v) {
  Coefficient c;
  c.kind = Kind::constant;
  c.value = v;
  return c;
}

Coefficient Coefficient::piecewise(std::vector<double> breakpoints,
                                   std::vector<std::vector<double>> polys) {
  Coefficient c;
  c.kind = Kind::piecewise;
  c.breakpoints = std::move(breakpoints);
  c.polys = std::move(polys);
  return c;
}

BoundaryMeasure BoundaryMeasure::dirac(double x) {
  BoundaryMeasure m;
  m.atoms.push_back({x, 1.0});
  return m;
}

double BoundaryMeasure::mass() const {
  double m = 0.0;
  for (const auto& a : atoms) m += a.w;
  if (density) {
    const auto& d = *density;
    for (std::size_t i = 0; i + 1 < d.breakpoints.size() && i < d.values.size(); ++i) {
      m += d.values[i] * (d.breakpoints[i + 1] - d.breakpoints[i]);
    }
  }
  return m;
}

ValidationReport validate(const ProblemSpec& spec, double b0_floor) {
  ValidationReport r;
  check_coefficient(spec.b0, "b0", true, b0_floor, r.violations);
  check_coefficient(spec.b1, "b1", false, b0_floor, r.violations);
  check_measure(spec.nu0, "nu0", r.violations);
  check_measure(spec.nu1, "nu1", r.violations);
  return r;
}

double eval_coeff(const Coefficient& c, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("eval_coeff: x = " + fmt(x) + " outside [0,1]");
  if (c.is_constant()) return c.value;
  if (c.breakpoints.size() < 2 || c.polys.size() + 1 != c.breakpoints.size()) {
    throw PreconditionError("eval_coeff: malformed piecewise coefficient");
  }
  return horner(piece_for(c, x), x);
}

namespace {
std::string describe(const ValidationReport& r) {
  std::string s = "invalid problem:";
  for (const auto& v : r.violations) s += " [" + v.field + ": " + v.rule + "]";
  return s;
}
}  // namespace

InvalidProblem::InvalidProblem(ValidationReport report)
    : PreconditionError(describe(report)), report_(std::move(report)) {}

Problem::Problem(ProblemSpec spec, double b0_floor) : spec_(std::move(spec)), b0_floor_(b0_floor) {
  auto report = validate(spec_, b0_floor_);
  if (!report.ok()) throw InvalidProblem(std::move(report));

  mesh_ = {0.0, 1.0};
  auto add = [this](const std::vector<double>& v) { mesh_.insert(mesh_.end(), v.begin(), v.end()); };
  if (!spec_.b0.is_constant()) add(spec_.b0.breakpoints);
  if (!spec_.b1.is_constant()) add(spec_.b1.breakpoints);
  for (const auto* nu : {&spec_.nu0, &spec_.nu1}) {
    if (nu->density) add(nu->density->breakpoints);
    for (const auto& a : nu->atoms) mesh_.push_back(a.x);
  }
  std::sort(mesh_.begin(), mesh_.end());
  mesh_.erase(std::unique(mesh_.begin(), mesh_.end()), mesh_.end());

  segments_.reserve(mesh_.size() - 1);
  for (std::size_t i = 0; i + 1 < mesh_.size(); ++i) {
    const double a = mesh_[i], b = mesh_[i + 1], mid = 0.5 * (a + b);
    segments_.push_back({a, b, cubic_on(spec_.b0, mid), cubic_on(spec_.b1, mid),
                         density_on(spec_.nu0, mid), density_on(spec_.nu1, mid)});
  }
}

double wronskian(const Problem& problem, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("wronskian: x = " + fmt(x) + " outside [0,1]");
  using boost::math::quadrature::gauss_kronrod;
  double integral = 0.0;
  for (const auto& s : problem.segments()) {
    if (s.a >= x) break;
    const double hi = std::min(s.b, x);
    auto ratio = [&s](double t) { return s.b1(t) / s.b0(t); };
    integral += gauss_kronrod<double, 15>::integrate(ratio, s.a, hi, 20, 1e-13);
  }
  return std::exp(-integral);
}

}  // namespace jumpspec
