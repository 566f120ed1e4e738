// Acceptance checks; one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "jumpspec/characteristic.hpp"
#include "jumpspec/contour.hpp"
#include "jumpspec/errors.hpp"
#include "jumpspec/ode.hpp"
#include "jumpspec/oracles.hpp"
#include "jumpspec/resolvent.hpp"
#include "jumpspec/rootfinder.hpp"
#include "reference.hpp"

using namespace jumpspec;

namespace {

const double p2 = ref::pi * ref::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

Problem dexin(double a) {
  return Problem({Coefficient::constant(-1.0), Coefficient::constant(0.0), BoundaryMeasure::dirac(a),
                  BoundaryMeasure::dirac(a)});
}

Problem de(double b0, double b1) {
  return Problem({Coefficient::constant(b0), Coefficient::constant(b1), BoundaryMeasure::dirac(0.5),
                  BoundaryMeasure::dirac(0.5)});
}

Outcome match_set(const SpectrumResult& r, const std::vector<std::pair<cplx, int>>& want, double tol) {
  if (r.eigenvalues.size() != want.size())
    return fail(fmt("found %zu eigenvalues, expected %zu", r.eigenvalues.size(), want.size()));
  double worst = 0.0;
  for (const auto& [z, m] : want) {
    auto it = std::min_element(r.eigenvalues.begin(), r.eigenvalues.end(), [&](const auto& a, const auto& b) {
      return std::abs(a.location - z) < std::abs(b.location - z);
    });
    const double e = rel(it->location, z);
    if (e >= tol) return fail(fmt("eigenvalue %.12g%+.12gi: relative error %.3g", z.real(), z.imag(), e));
    if (it->multiplicity != m)
      return fail(fmt("eigenvalue %.12g%+.12gi: multiplicity %d, expected %d", z.real(), z.imag(),
                      it->multiplicity, m));
    worst = std::max(worst, e);
  }
  return {true, fmt("max relative error %.2e", worst)};
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = find_spectrum(dexin(0.5), {1.0, 400.0, -1.0, 1.0});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto o = match_set(r, {{4 * p2, 1}, {16 * p2, 3}, {36 * p2, 1}}, 1e-8);
  if (o.pass && secs >= 30.0) return fail(fmt("runtime %.1f s", secs));
  o.detail += fmt(", %.2f s", secs);
  return o;
}

Outcome criterion2() {
  const auto r = find_spectrum(dexin(1.0 / 3.0), {300.0, 420.0, -1.0, 1.0});
  for (const auto& e : r.eigenvalues) {
    if (std::abs(e.location - 36 * p2) < 1.0) {
      const double err = rel(e.location, 36 * p2);
      if (e.multiplicity != 3) return fail(fmt("multiplicity %d at 36 pi^2", e.multiplicity));
      if (err >= 1e-8) return fail(fmt("relative error %.3g", err));
      return {true, fmt("multiplicity 3, relative error %.2e", err)};
    }
  }
  return fail("no eigenvalue near 36 pi^2");
}

Outcome criterion3() {
  const auto r = find_spectrum(dexin(std::sqrt(0.5)), {1.0, 600.0, -1.0, 1.0});
  if (r.eigenvalues.empty()) return fail("no eigenvalues found");
  for (const auto& e : r.eigenvalues)
    if (e.multiplicity != 1) return fail(fmt("multiplicity %d at %.10g", e.multiplicity, e.location.real()));
  return {true, fmt("%zu eigenvalues, all simple, total count %d", r.eigenvalues.size(), r.total_count)};
}

Outcome criterion4() {
  const auto r = find_spectrum(de(-1.0, 1.0), {1.0, 200.0, -20.0, 20.0});
  std::string found;
  for (const auto& e : r.eigenvalues)
    found += fmt(" %.6f%+.6fi(x%d)", e.location.real(), e.location.imag(), e.multiplicity);
  auto o = match_set(r, {{4 * p2 + 0.25, 1}, {cplx(16 * p2, -2 * ref::pi), 1}, {cplx(16 * p2, 2 * ref::pi), 1}},
                     1e-8);
  o.detail += "; found" + found;
  return o;
}

Outcome criterion5() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (int pair = 0; pair < 5; ++pair) {
    const double b0 = -0.5 - 2.0 * U(rng), b1 = 6.0 * U(rng) - 3.0;
    const auto p = de(b0, b1);
    const double q = b1 * b1 / (4.0 * b0 * b0);
    for (int k = 0; k < 200; ++k) {
      const double r = 1e4 * std::sqrt(U(rng)), th = 2.0 * ref::pi * U(rng);
      const cplx lambda = std::polar(r, th);
      const cplx d = delta(p, lambda);
      const cplx t = ref::de_delta_tilde(b0, b1, -lambda / b0 - q);
      const double e = std::abs(d - t) / (1.0 + std::abs(d));
      worst = std::max(worst, e);
      if (e >= 1e-8)
        return fail(fmt("b0=%g b1=%g lambda=%g%+gi: scaled difference %.3g", b0, b1, lambda.real(),
                        lambda.imag(), e));
    }
  }
  return {true, fmt("max scaled difference %.2e", worst)};
}

Outcome criterion6() {
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double b1 = 40.0 * k / 19.0;
    const double got = spectral_gap(de(-1.0, b1), {1.0, 170.0, -520.0, 520.0});
    const double want = ref::de_gap(-1.0, b1);
    const double e = std::abs(got - want);
    worst = std::max(worst, e);
    if (e >= 1e-6) return fail(fmt("b1=%g: gap %.12g, expected %.12g", b1, got, want));
  }
  return {true, fmt("max absolute error %.2e", worst)};
}

Outcome criterion7() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Problem p(ref::random_piecewise_problem(rng));
    const double v = std::abs(delta(p, 0.0));
    worst = std::max(worst, v);
    if (v >= 1e-10) return fail(fmt("problem %d: |Delta(0)| = %.3g", k, v));
  }
  return {true, fmt("max |Delta(0)| %.2e", worst)};
}

// Variable but smooth coefficients (one cubic piece each), mixed measures.
ProblemSpec smooth_problem(std::mt19937_64& rng) {
  for (;;) {
    auto s = ref::random_piecewise_problem(rng);
    if (s.b0.breakpoints.size() == 2 && s.b1.breakpoints.size() == 2) return s;
  }
}

double sup(const SampledFunction& f) {
  double m = 0.0;
  for (const auto& v : f.values) m = std::max(m, std::abs(v));
  return m;
}

Outcome criterion8() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst_res = 0.0, worst_bc = 0.0, worst_rt = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Problem p(smooth_problem(rng));
    const auto& s = p.spec();
    cplx lambda;
    do {
      lambda = cplx(20.0 * U(rng), 20.0 * U(rng));
    } while (std::abs(delta(p, lambda)) < 1e-3);
    const cplx a(U(rng), U(rng)), b(U(rng), U(rng));
    const double k = 1.0 + 3.0 * std::abs(U(rng));
    auto f = [&](double x) { return a * std::cos(k * x) + b * std::exp(-x); };

    const double h = 1.0 / 32.0;
    const auto centers = ref::clean_centers(s, h);
    const auto nodes = ref::probe_nodes(s, centers, h);
    auto fx = uniform_nodes(kDefaultSamples);
    fx.insert(fx.end(), nodes.begin(), nodes.end());
    std::sort(fx.begin(), fx.end());
    fx.erase(std::unique(fx.begin(), fx.end()), fx.end());
    const auto fs = SampledFunction::sample(fx, f);
    const auto u = resolvent_apply(p, lambda, fs, {}, nodes);
    std::map<double, cplx> m;
    for (std::size_t i = 0; i < u.nodes.size(); ++i) m[u.nodes[i]] = u.values[i];
    auto at = [&m](double x) { return m.at(x); };
    const double res = ref::max_residual(p, lambda, at, f, centers, h) / (1.0 + sup(fs));
    const double bc = std::max(std::abs(m.at(0.0) - ref::integrate_measure(s.nu0, at)),
                               std::abs(m.at(1.0) - ref::integrate_measure(s.nu1, at))) /
                      (1.0 + sup(u));

    // left inverse: u0 in the domain, f0 = (L - lambda) u0, R f0 = u0
    auto base = [](double x) { return x * x * (1 - x) * (1 - x); };
    auto mom = [](const BoundaryMeasure& nu, const std::function<cplx(double)>& g) {
      return ref::integrate_measure(nu, g);
    };
    auto id = [](double x) { return cplx(x); };
    auto cube = [](double x) { return cplx(x * x * x); };
    const cplx P0 = mom(s.nu0, base), X0 = mom(s.nu0, id), C0 = mom(s.nu0, cube);
    const cplx P1 = mom(s.nu1, base), X1 = mom(s.nu1, id), C1 = mom(s.nu1, cube);
    const cplx det = X0 * (1.0 - C1) - C0 * (1.0 - X1);
    const cplx al = (-P0 * (1.0 - C1) - C0 * P1) / det;
    const cplx be = (X0 * P1 + P0 * (1.0 - X1)) / det;
    auto u0 = [&](double x) { return base(x) + al * x + be * x * x * x; };
    auto u0p = [&](double x) { return 2 * x * (1 - x) * (1 - 2 * x) + al + 3.0 * be * x * x; };
    auto u0pp = [&](double x) { return 2.0 - 12 * x + 12 * x * x + 6.0 * be * x; };
    auto f0 = [&](double x) { return p.b0(x) * u0pp(x) + p.b1(x) * u0p(x) - lambda * u0(x); };
    const auto back = resolvent_apply(p, lambda, SampledFunction::uniform(kDefaultSamples, f0));
    double rt = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < back.nodes.size(); ++i) {
      rt = std::max(rt, std::abs(back.values[i] - u0(back.nodes[i])));
      scale = std::max(scale, std::abs(u0(back.nodes[i])));
    }
    rt /= 1.0 + scale;

    worst_res = std::max(worst_res, res);
    worst_bc = std::max(worst_bc, bc);
    worst_rt = std::max(worst_rt, rt);
    if (res >= 1e-6 || bc >= 1e-8 || rt >= 1e-6)
      return fail(fmt("trial %d: residual %.3g, boundary %.3g, round trip %.3g", trial, res, bc, rt));
  }
  return {true, fmt("residual %.2e, boundary %.2e, round trip %.2e", worst_res, worst_bc, worst_rt)};
}

Outcome criterion9() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0, worst_fd = 0.0;
  ToleranceSettings tol;
  tol.route = BasisRoute::integrate;
  auto err = [](cplx a, cplx b) { return std::abs(a - b) / (1.0 + std::abs(b)); };
  for (int k = 0; k < 100; ++k) {
    const double b0 = -0.5 - 1.5 * U(rng), b1 = 4.0 * U(rng) - 2.0;
    const cplx lambda = std::polar(1e4 * std::sqrt(U(rng)), 2.0 * ref::pi * U(rng));
    const Problem p({Coefficient::constant(b0), Coefficient::constant(b1), BoundaryMeasure::dirac(0.5),
                     BoundaryMeasure::dirac(0.5)});
    const auto basis = integrate_basis(p, lambda, tol);
    const double h = 1e-4 * (1.0 + std::abs(lambda));
    std::array<FundamentalBasis, 4> near{integrate_basis(p, lambda - 2.0 * h, tol),
                                         integrate_basis(p, lambda - h, tol), integrate_basis(p, lambda + h, tol),
                                         integrate_basis(p, lambda + 2.0 * h, tol)};
    for (int i = 0; i <= 200; ++i) {
      const double x = i / 200.0;
      const auto a = eval_basis(basis, x);
      const auto e = closed_form_basis(b0, b1, lambda, x);
      for (auto [g, w] : {std::pair{a.y1, e.y1}, {a.y1_prime, e.y1_prime}, {a.y2, e.y2}, {a.y2_prime, e.y2_prime}}) {
        const double d = err(g, w);
        worst = std::max(worst, d);
        if (d >= 1e-8) return fail(fmt("lambda=%g%+gi x=%g: discrepancy %.3g", lambda.real(), lambda.imag(), x, d));
      }
      if (i % 20) continue;
      std::array<BasisPoint, 4> v;
      for (int j = 0; j < 4; ++j) v[j] = eval_basis(near[j], x);
      auto fd = [&](auto field) {
        return (v[0].*field - 8.0 * (v[1].*field) + 8.0 * (v[2].*field) - v[3].*field) / (12.0 * h);
      };
      for (auto [g, field] : {std::pair{a.y1_dlambda, &BasisPoint::y1}, {a.y1_prime_dlambda, &BasisPoint::y1_prime},
                              {a.y2_dlambda, &BasisPoint::y2}, {a.y2_prime_dlambda, &BasisPoint::y2_prime}}) {
        const cplx w = fd(field);
        const double d = err(g, w);
        worst_fd = std::max(worst_fd, d);
        if (d >= 1e-6)
          return fail(fmt("lambda=%g%+gi x=%g: derivative vs difference %.3g", lambda.real(), lambda.imag(), x, d));
      }
    }
  }
  return {true, fmt("max discrepancy %.2e, derivatives %.2e", worst, worst_fd)};
}

Outcome criterion10() {
  const auto p = dexin(0.5);
  ValueFunction value = [&](cplx z) { return delta(p, z); };
  ValueDerivativeFunction pair = [&](cplx z) { return delta_with_prime(p, z); };
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  int counts = 0;
  auto count = [&](const ContourRegion& r, bool& moved) {
    const auto c = count_in_region(value, pair, r, {});
    worst = std::max(worst, c.integral.residual());
    moved = moved || c.perturbations > 0;
    ++counts;
    return c.count;
  };
  for (int k = 0; k < 50; ++k) {
    const double x0 = -100.0 + 900.0 * U(rng), w = 20.0 + 500.0 * U(rng);
    const double y0 = -60.0 * U(rng), hgt = 10.0 + 80.0 * U(rng);
    const ContourRegion r{x0, x0 + w, y0, y0 + hgt};
    bool moved = false;
    const int whole = count(r, moved);
    const ContourRegion used = count_in_region(value, pair, r, {}).region;
    for (int attempt = 0;; ++attempt) {
      if (attempt == 20) return fail(fmt("region %d: no clear split lines", k));
      moved = false;
      const double sx = used.re_min + used.width() * (0.3 + 0.4 * U(rng));
      const double sy = used.im_min + used.height() * (0.3 + 0.4 * U(rng));
      const int two = count({used.re_min, sx, used.im_min, used.im_max}, moved) +
                      count({sx, used.re_max, used.im_min, used.im_max}, moved);
      const int four = count({used.re_min, sx, used.im_min, sy}, moved) + count({sx, used.re_max, used.im_min, sy}, moved) +
                       count({used.re_min, sx, sy, used.im_max}, moved) + count({sx, used.re_max, sy, used.im_max}, moved);
      if (moved) continue;
      if (two != whole || four != whole)
        return fail(fmt("region %d: whole %d, halves %d, quarters %d", k, whole, two, four));
      break;
    }
  }
  if (worst >= 1e-3) return fail(fmt("winding residual %.3g", worst));
  return {true, fmt("%d counts, max winding residual %.2e", counts, worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> all{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}};
  int failed = 0;
  for (const auto& [id, run] : all) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("criterion %2d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
