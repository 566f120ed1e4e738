#pragma once

// Operator data for b0(x) y'' + b1(x) y' on (0,1) with the nonlocal boundary
// conditions y(0) = \int y dnu0 and y(1) = \int y dnu1.

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jumpspec/errors.hpp"

namespace jumpspec {

using cplx = std::complex<double>;

inline constexpr double kDefaultB0Floor = 1e-8;
inline constexpr double kMassTolerance = 1e-12;
inline constexpr int kMaxPolynomialDegree = 3;

/// Real coefficient function on [0,1]: a constant, or piecewise polynomials in
/// the absolute coordinate x (ascending coefficients, degree <= 3).
struct Coefficient {
  enum class Kind { constant, piecewise };

  Kind kind = Kind::constant;
  double value = 0.0;
  std::vector<double> breakpoints;
  std::vector<std::vector<double>> polys;

  static Coefficient constant(double v);
  static Coefficient piecewise(std::vector<double> breakpoints,
                               std::vector<std::vector<double>> polys);

  bool is_constant() const noexcept { return kind == Kind::constant; }
};

struct Atom {
  double x = 0.0;
  double w = 0.0;
};

/// Piecewise-constant density on a breakpoint mesh of [0,1].
struct Density {
  std::vector<double> breakpoints;
  std::vector<double> values;
};

/// Probability measure on (0,1): Dirac atoms plus an optional density.
struct BoundaryMeasure {
  std::vector<Atom> atoms;
  std::optional<Density> density;

  static BoundaryMeasure dirac(double x);
  double mass() const;
  bool atoms_only() const noexcept { return !density.has_value(); }
};

/// Raw operator description as read from a file; may violate invariants.
struct ProblemSpec {
  Coefficient b0;
  Coefficient b1;
  BoundaryMeasure nu0;
  BoundaryMeasure nu1;
};

struct Violation {
  std::string field;
  std::string rule;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Checks every invariant of the coefficient and measure data. Violations are
/// reported as data; this never throws.
ValidationReport validate(const ProblemSpec& spec, double b0_floor = kDefaultB0Floor);

/// Polynomial value of the interval containing x. Interior breakpoints use the
/// right-hand interval; x = 1 uses the last one.
double eval_coeff(const Coefficient& c, double x);

class InvalidProblem : public PreconditionError {
 public:
  explicit InvalidProblem(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Cubic in the absolute coordinate, ascending coefficients.
struct Cubic {
  std::array<double, 4> c{};
  double operator()(double x) const noexcept { return ((c[3] * x + c[2]) * x + c[1]) * x + c[0]; }
};

/// One interval of the master mesh. Coefficients and densities are smooth on it.
struct Segment {
  double a = 0.0;
  double b = 1.0;
  Cubic b0;
  Cubic b1;
  double rho0 = 0.0;
  double rho1 = 0.0;
};

/// A validated, immutable problem. Construction merges all breakpoints (both
/// coefficients, both densities, and every atom location) into one master mesh
/// so integrators never straddle a discontinuity and atoms are mesh nodes.
class Problem {
 public:
  explicit Problem(ProblemSpec spec, double b0_floor = kDefaultB0Floor);

  const ProblemSpec& spec() const noexcept { return spec_; }
  double b0_floor() const noexcept { return b0_floor_; }

  std::span<const double> mesh() const noexcept { return mesh_; }
  std::span<const Segment> segments() const noexcept { return segments_; }

  double b0(double x) const { return eval_coeff(spec_.b0, x); }
  double b1(double x) const { return eval_coeff(spec_.b1, x); }
  /// Weight w = -1/b0 of the space L^2_w.
  double weight(double x) const { return -1.0 / b0(x); }

  bool constant_coefficients() const noexcept {
    return spec_.b0.is_constant() && spec_.b1.is_constant();
  }
  bool atoms_only() const noexcept { return spec_.nu0.atoms_only() && spec_.nu1.atoms_only(); }

 private:
  ProblemSpec spec_;
  double b0_floor_;
  std::vector<double> mesh_;
  std::vector<Segment> segments_;
};

/// W(x) = exp(-\int_0^x b1/b0 dt) by adaptive Gauss-Kronrod on the master mesh.
double wronskian(const Problem& problem, double x);

}  // namespace jumpspec
