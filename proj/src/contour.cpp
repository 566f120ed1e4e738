#include "jumpspec/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "jumpspec/errors.hpp"

namespace jumpspec {

using cplx = std::complex<double>;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
const cplx two_pi_i{0.0, two_pi};

struct Piece {
  cplx a, b;  // straight segment from a to b
  std::array<cplx, 3> value{};
  double error = 0.0;
  bool operator<(const Piece& o) const noexcept { return error < o.error; }
};

// Gauss-Kronrod 7/15 on one straight segment, integrand (z - anchor)^k f'/f.
Piece gk15(const ValueDerivativeFunction& f, cplx a, cplx b, cplx anchor, double scale, std::size_t& evals) {
  using boost::math::quadrature::gauss;
  using boost::math::quadrature::gauss_kronrod;
  const auto& xk = gauss_kronrod<double, 15>::abscissa();
  const auto& wk = gauss_kronrod<double, 15>::weights();
  const auto& wg = gauss<double, 7>::weights();
  const cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);

  std::array<cplx, 3> k{}, g{};
  auto add = [&](double x, double kw, double gw) {
    const cplx z = mid + half * x;
    const auto [v, d] = f(z);
    ++evals;
    const cplx q = d / v;
    if (!std::isfinite(q.real()) || !std::isfinite(q.imag())) {
      std::ostringstream os;
      os.precision(17);
      os << "contour passes through a zero near " << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
      throw ContourError(os.str());
    }
    const cplx s = z - anchor;
    const std::array<cplx, 3> t{q, q * s, q * s * s};
    for (int i = 0; i < 3; ++i) {
      k[i] += kw * t[i];
      g[i] += gw * t[i];
    }
  };
  for (std::size_t i = 0; i < xk.size(); ++i) {
    const double gw = i % 2 == 0 ? wg[i / 2] : 0.0;
    if (i == 0) {
      add(0.0, wk[0], gw);
      continue;
    }
    add(xk[i], wk[i], gw);
    add(-xk[i], wk[i], gw);
  }
  Piece p{a, b};
  for (int i = 0; i < 3; ++i) {
    p.value[i] = half * k[i] / two_pi_i;
    const double e = std::abs(half * (k[i] - g[i])) / two_pi / std::pow(scale, i);
    p.error = std::max(p.error, e);
  }
  return p;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto m = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), m, v.end());
  return *m;
}

}  // namespace

int ContourIntegral::count() const noexcept { return static_cast<int>(std::lround(winding.real())); }

double ContourIntegral::residual() const noexcept { return std::abs(winding - cplx(count(), 0.0)); }

cplx ContourIntegral::centroid() const noexcept { return anchor + moments[0] / static_cast<double>(count()); }

double ContourIntegral::spread() const noexcept {
  const double n = count();
  if (n <= 1) return 0.0;
  const cplx mean = moments[0] / n;
  return std::sqrt(std::abs(moments[1] / n - mean * mean));
}

ContourIntegral integrate_rectangle(const ValueDerivativeFunction& f, const ContourRegion& r,
                                    const ContourSettings& settings) {
  if (!r.valid()) throw PreconditionError("contour: region bounds must be finite and well ordered");
  const std::array<cplx, 4> corners{cplx(r.re_min, r.im_min), cplx(r.re_max, r.im_min), cplx(r.re_max, r.im_max),
                                    cplx(r.re_min, r.im_max)};
  const cplx anchor = r.center();
  const double scale = 0.5 * r.diameter();
  ContourIntegral out;
  out.anchor = anchor;

  std::vector<Piece> heap;
  const std::size_t n0 = std::max<std::size_t>(1, settings.initial_segments);
  for (int e = 0; e < 4; ++e) {
    const cplx a = corners[e], b = corners[(e + 1) % 4];
    for (std::size_t i = 0; i < n0; ++i) {
      const cplx p = i == 0 ? a : a + (b - a) * (double(i) / double(n0));
      const cplx q = i + 1 == n0 ? b : a + (b - a) * (double(i + 1) / double(n0));
      heap.push_back(gk15(f, p, q, anchor, scale, out.evaluations));
    }
  }

  std::make_heap(heap.begin(), heap.end());
  auto total_error = [&heap] {
    double e = 0.0;
    for (const auto& p : heap) e += p.error;
    return e;
  };

  double err = total_error();
  while (err > settings.winding_target) {
    if (out.evaluations > settings.max_evaluations) {
      std::ostringstream os;
      os << "contour integral did not reach its accuracy target (error " << err << ")";
      throw AccuracyError(os.str());
    }
    std::pop_heap(heap.begin(), heap.end());
    const Piece worst = heap.back();
    heap.pop_back();
    const cplx m = 0.5 * (worst.a + worst.b);
    const Piece left = gk15(f, worst.a, m, anchor, scale, out.evaluations);
    const Piece right = gk15(f, m, worst.b, anchor, scale, out.evaluations);
    err += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
    if (err <= settings.winding_target) err = total_error();
  }

  for (const auto& p : heap) {
    out.winding += p.value[0];
    out.moments[0] += p.value[1];
    out.moments[1] += p.value[2];
    out.error += p.error;
  }
  return out;
}

ContourIntegral integrate_circle(const ValueDerivativeFunction& f, cplx center, double radius, std::size_t n) {
  if (!(radius > 0.0) || n < 4) throw PreconditionError("integrate_circle: needs radius > 0 and n >= 4");
  ContourIntegral out;
  out.anchor = center;
  for (std::size_t j = 0; j < n; ++j) {
    const cplx s = std::polar(radius, two_pi * double(j) / double(n));
    const auto [v, d] = f(center + s);
    ++out.evaluations;
    const cplx q = d / v;
    if (!std::isfinite(q.real()) || !std::isfinite(q.imag())) {
      throw ContourError("circle passes through a zero");
    }
    // dz = i s dtheta, so (1/2 pi i) \oint g dz is the mean of g s.
    out.winding += q * s;
    out.moments[0] += q * s * s;
    out.moments[1] += q * s * s * s;
  }
  out.winding /= double(n);
  out.moments[0] /= double(n);
  out.moments[1] /= double(n);
  return out;
}

Clearance polyline_clearance(const ValueFunction& f, std::initializer_list<std::pair<cplx, cplx>> segments,
                             const ContourSettings& settings) {
  const std::size_t n = std::max<std::size_t>(2, settings.clearance_samples);
  Clearance worst;
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : segments) {
    std::vector<double> mags;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx z = i + 1 == n ? b : a + (b - a) * (double(i) / double(n - 1));
      mags.push_back(std::abs(f(z)));
    }
    Clearance c;
    c.min_abs = *std::min_element(mags.begin(), mags.end());
    c.median_abs = median_of(std::move(mags));
    c.clear = std::isfinite(c.median_abs) && c.min_abs > settings.clearance_ratio * c.median_abs;
    const double ratio = c.clear ? c.min_abs / c.median_abs : -1.0;
    if (ratio < worst_ratio) {
      worst = c;
      worst_ratio = ratio;
    }
  }
  return worst;
}

Clearance edge_clearance(const ValueFunction& f, const ContourRegion& r, const ContourSettings& settings) {
  const cplx a(r.re_min, r.im_min), b(r.re_max, r.im_min), c(r.re_max, r.im_max), d(r.re_min, r.im_max);
  return polyline_clearance(f, {{a, b}, {b, c}, {c, d}, {d, a}}, settings);
}

ContourRegion perturbed_region(const ContourRegion& region, int attempt) {
  if (attempt <= 0) return region;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  const double jitter = std::fmod(attempt * phi, 1.0);
  const double c = 0.005 + 0.01 * jitter;
  return region.scaled(1.0 + std::ldexp(c, -attempt));
}

ZeroCount count_in_region(const ValueFunction& value, const ValueDerivativeFunction& f, const ContourRegion& region,
                          const ContourSettings& settings) {
  if (!region.valid()) throw PreconditionError("contour: region bounds must be finite and well ordered");
  std::string last;
  for (int attempt = 0; attempt <= settings.max_perturbations; ++attempt) {
    const ContourRegion r = perturbed_region(region, attempt);
    const auto clearance = edge_clearance(value, r, settings);
    if (!clearance.clear) {
      last = "insufficient edge clearance";
      continue;
    }
    try {
      auto integral = integrate_rectangle(f, r, settings);
      if (integral.residual() > settings.integer_tolerance || integral.count() < 0) {
        last = "non-integer winding";
        continue;
      }
      return {integral.count(), r, integral, attempt};
    } catch (const ContourError& e) {
      last = e.what();
    } catch (const AccuracyError& e) {
      last = e.what();
    }
  }
  throw ContourError("no zero-free contour found after " + std::to_string(settings.max_perturbations) +
                     " perturbations (" + last + ")");
}

}  // namespace jumpspec
