#include "jumpspec/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace jumpspec {

namespace {

constexpr double pi = std::numbers::pi;

// sin(w)/w, even in w.
cplx sinc(cplx w) {
  if (std::abs(w) < 1e-4) {
    const cplx w2 = w * w;
    return 1.0 - w2 / 6.0 + w2 * w2 / 120.0;
  }
  return std::sin(w) / w;
}

bool is_single_atom(const BoundaryMeasure& m) {
  return m.atoms_only() && m.atoms.size() == 1 && m.atoms[0].w == 1.0;
}

bool is_dirac_half(const BoundaryMeasure& m) { return is_single_atom(m) && m.atoms[0].x == 0.5; }

}  // namespace

ProblemSpec dexin_problem(const DexinSpec& spec) {
  if (!(spec.a > 0.0 && spec.a < 1.0)) throw DomainError("dexin: a must lie in (0,1)");
  return {Coefficient::constant(-1.0), Coefficient::constant(0.0), BoundaryMeasure::dirac(spec.a),
          BoundaryMeasure::dirac(spec.a)};
}

ProblemSpec de_problem(const DeSpec& spec) {
  if (!(spec.b0 < 0.0)) throw DomainError("de: b0 must be negative");
  return {Coefficient::constant(spec.b0), Coefficient::constant(spec.b1), BoundaryMeasure::dirac(0.5),
          BoundaryMeasure::dirac(0.5)};
}

std::optional<DeSpec> match_de(const ProblemSpec& spec) {
  if (!spec.b0.is_constant() || !spec.b1.is_constant() || !(spec.b0.value < 0.0)) return std::nullopt;
  if (!is_dirac_half(spec.nu0) || !is_dirac_half(spec.nu1)) return std::nullopt;
  return DeSpec{spec.b0.value, spec.b1.value};
}

std::optional<DexinSpec> match_dexin(const ProblemSpec& spec) {
  if (!spec.b0.is_constant() || !spec.b1.is_constant()) return std::nullopt;
  if (spec.b0.value != -1.0 || spec.b1.value != 0.0) return std::nullopt;
  if (!is_single_atom(spec.nu0) || !is_single_atom(spec.nu1)) return std::nullopt;
  if (spec.nu0.atoms[0].x != spec.nu1.atoms[0].x) return std::nullopt;
  return DexinSpec{spec.nu0.atoms[0].x};
}

cplx dexin_delta(const DexinSpec& spec, cplx lambda) {
  const double a = spec.a;
  const cplx s = std::sqrt(lambda);
  return -lambda * (a * (1.0 - a) / 2.0) * sinc(s * (1.0 - a) / 2.0) * sinc(s * a / 2.0) * sinc(s / 2.0);
}

std::vector<OracleEigenvalue> dexin_spectrum(const DexinSpec& spec, double re_max) {
  if (!(re_max > 0.0)) throw PreconditionError("dexin_spectrum: re_max must be positive");
  if (!(spec.a > 0.0 && spec.a < 1.0)) throw DomainError("dexin: a must lie in (0,1)");
  std::vector<double> zeros;
  for (double c : {1.0 - spec.a, spec.a, 1.0}) {
    for (int k = 1;; ++k) {
      const double z = std::pow(2.0 * k * pi / c, 2);
      if (z > re_max) break;
      zeros.push_back(z);
    }
  }
  std::sort(zeros.begin(), zeros.end());
  std::vector<OracleEigenvalue> out{{0.0, 1}};
  for (std::size_t i = 0; i < zeros.size();) {
    std::size_t j = i + 1;
    while (j < zeros.size() && std::abs(zeros[j] - zeros[i]) <= 1e-9 * zeros[i]) ++j;
    // Two coinciding factors force the third: a shared zero of sin(s a/2) and
    // sin(s (1-a)/2) is a zero of sin(s/2), and so on.
    out.push_back({zeros[i], j - i >= 2 ? 3 : 1});
    i = j;
  }
  return out;
}

cplx de_delta_tilde(const DeSpec& spec, cplx u) {
  const double A = std::exp(spec.b1 / (-4.0 * spec.b0));
  const cplx h = std::sqrt(u) / 2.0;
  return -A * A * sinc(h) * ((A * A + 1.0) / (2.0 * A) - std::cos(h));
}

std::vector<OracleEigenvalue> de_spectrum(const DeSpec& spec, int n_max) {
  if (!(spec.b0 < 0.0)) throw DomainError("de: b0 must be negative");
  if (spec.b1 == 0.0) throw PreconditionError("de_spectrum: b1 = 0 is the dexin family with a = 1/2");
  if (n_max < 0) throw PreconditionError("de_spectrum: n_max must be nonnegative");
  const double b0 = spec.b0, b1 = spec.b1;
  std::vector<OracleEigenvalue> out{{0.0, 1}};
  for (int n = 1; n <= n_max; ++n) {
    out.push_back({-4.0 * b0 * n * n * pi * pi - b1 * b1 / (4.0 * b0), 1});
    const double re = -16.0 * b0 * n * n * pi * pi, im = 4.0 * b1 * n * pi;
    out.push_back({{re, -im}, 1});
    out.push_back({{re, im}, 1});
  }
  return out;
}

double de_gap(const DeSpec& spec) {
  if (!(spec.b0 < 0.0)) throw DomainError("de: b0 must be negative");
  const double b0 = spec.b0, b1 = spec.b1;
  if (std::abs(b1) <= -4.0 * std::sqrt(3.0) * b0 * pi) return -4.0 * b0 * pi * pi - b1 * b1 / (4.0 * b0);
  return -16.0 * b0 * pi * pi;
}

}  // namespace jumpspec
