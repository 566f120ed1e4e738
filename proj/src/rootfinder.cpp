#include "jumpspec/rootfinder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>

#include "jumpspec/characteristic.hpp"
#include "jumpspec/parallel.hpp"

namespace jumpspec {

namespace {

constexpr double kCloseFormNoise = 2.220446049250313e-16;
constexpr double kClusterSpread = 0.05;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string fmt(cplx z) { return fmt(z.real()) + (z.imag() < 0 ? "" : "+") + fmt(z.imag()) + "i"; }

std::string fmt(const ContourRegion& r) {
  return "[" + fmt(r.re_min) + ", " + fmt(r.re_max) + "] x [" + fmt(r.im_min) + ", " + fmt(r.im_max) + "]";
}

struct Box {
  ContourRegion r;
  int count = 0;
  ContourIntegral integral;
};

class Context {
 public:
  Context(const Problem& problem, const ToleranceSettings& tol, const RootfinderSettings& settings)
      : problem_(problem), tol_(tol), settings_(settings), closed_(uses_closed_form(problem, tol)) {
    value = [this](cplx z) { return delta_derivatives(problem_, z, 0, tol_).value[0]; };
    pair = [this](cplx z) {
      const auto d = delta_derivatives(problem_, z, 1, tol_);
      return std::pair{d.value[0], d.value[1]};
    };
  }

  DeltaDerivatives derivatives(cplx z, int order) const { return delta_derivatives(problem_, z, order, tol_); }

  /// |Delta| below this is indistinguishable from evaluation noise.
  double noise_floor(const DeltaDerivatives& d) const {
    const double eps = closed_ ? kCloseFormNoise : std::max(kCloseFormNoise, tol_.rtol);
    return 1e3 * eps * d.scale[0];
  }

  const RootfinderSettings& settings() const noexcept { return settings_; }
  unsigned threads() const noexcept { return tol_.threads; }

  void note(std::string s) const {
    std::lock_guard lock(mutex_);
    notes_.push_back(std::move(s));
  }
  void record_residual(double r) const {
    std::lock_guard lock(mutex_);
    residuals_.push_back(r);
  }
  std::vector<std::string> take_notes() const { return std::move(notes_); }
  std::vector<double> take_residuals() const { return std::move(residuals_); }

  ValueFunction value;
  ValueDerivativeFunction pair;

 private:
  const Problem& problem_;
  const ToleranceSettings& tol_;
  const RootfinderSettings& settings_;
  bool closed_;
  mutable std::mutex mutex_;
  mutable std::vector<std::string> notes_;
  mutable std::vector<double> residuals_;
};

// Split positions, tried in order; the first is slightly off center.
const std::array<double, 8>& split_fractions() {
  static const std::array<double, 8> f{0.5 + 0.02 * (0.5 * (std::sqrt(5.0) - 1.0) - 0.5), 0.45, 0.55, 0.4,
                                       0.6, 0.35, 0.65, 0.3};
  return f;
}

std::vector<Box> split(const Context& ctx, const Box& parent) {
  const auto& s = ctx.settings();
  const ContourRegion& p = parent.r;
  const bool wide = p.width() > 2.0 * p.height();
  const bool tall = p.height() > 2.0 * p.width();
  ContourSettings line = s.contour;
  line.clearance_ratio = s.split_clearance_ratio;
  std::string last;

  for (double f : split_fractions()) {
    const double xs = p.re_min + f * p.width(), ys = p.im_min + f * p.height();
    std::vector<ContourRegion> kids;
    if (wide) {
      if (!polyline_clearance(ctx.value, {{cplx(xs, p.im_min), cplx(xs, p.im_max)}}, line).clear) continue;
      kids = {{p.re_min, xs, p.im_min, p.im_max}, {xs, p.re_max, p.im_min, p.im_max}};
    } else if (tall) {
      if (!polyline_clearance(ctx.value, {{cplx(p.re_min, ys), cplx(p.re_max, ys)}}, line).clear) continue;
      kids = {{p.re_min, p.re_max, p.im_min, ys}, {p.re_min, p.re_max, ys, p.im_max}};
    } else {
      if (!polyline_clearance(ctx.value,
                              {{cplx(xs, p.im_min), cplx(xs, p.im_max)}, {cplx(p.re_min, ys), cplx(p.re_max, ys)}},
                              line)
               .clear)
        continue;
      kids = {{p.re_min, xs, p.im_min, ys}, {xs, p.re_max, p.im_min, ys},
              {p.re_min, xs, ys, p.im_max}, {xs, p.re_max, ys, p.im_max}};
    }
    std::vector<Box> out;
    int total = 0;
    bool ok = true;
    for (const auto& k : kids) {
      try {
        auto integral = integrate_rectangle(ctx.pair, k, s.contour);
        if (integral.residual() > s.contour.integer_tolerance || integral.count() < 0) {
          last = "non-integer winding " + fmt(integral.winding);
          ok = false;
          break;
        }
        total += integral.count();
        out.push_back({k, integral.count(), integral});
      } catch (const NumericalError& e) {
        last = e.what();
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (total != parent.count) {
      last = "child counts sum to " + std::to_string(total) + ", expected " + std::to_string(parent.count);
      continue;
    }
    for (const auto& b : out) ctx.record_residual(b.integral.residual());
    std::erase_if(out, [](const Box& b) { return b.count == 0; });
    return out;
  }
  throw ClusteringError("cannot subdivide " + fmt(p) + (last.empty() ? "" : " (" + last + ")"));
}

bool isolated(const Box& b, double iso) {
  if (b.count == 1) return true;
  return b.r.diameter() < iso && b.integral.spread() <= kClusterSpread * b.r.diameter();
}

std::vector<Box> localize_boxes(const Context& ctx, const Box& root, double iso) {
  std::vector<Box> level{root}, done;
  for (int depth = 0; !level.empty(); ++depth) {
    if (depth > ctx.settings().max_depth) {
      throw ClusteringError("subdivision depth exceeded " + std::to_string(ctx.settings().max_depth) + " near " +
                            fmt(level.front().r.center()));
    }
    std::vector<std::vector<Box>> next(level.size()), fin(level.size());
    parallel_for(level.size(), ctx.threads(), [&](std::size_t i) {
      const Box& b = level[i];
      if (b.count == 0) return;
      if (isolated(b, iso)) {
        fin[i].push_back(b);
        return;
      }
      next[i] = split(ctx, b);
    });
    level.clear();
    for (std::size_t i = 0; i < next.size(); ++i) {
      done.insert(done.end(), fin[i].begin(), fin[i].end());
      level.insert(level.end(), next[i].begin(), next[i].end());
    }
  }
  return done;
}

struct NewtonOutcome {
  cplx z;
  int iterations = 0;
  double last_step = 0.0;
  bool escaped = false;
  bool converged = false;
};

// Newton on Delta/Delta', which has only simple zeros.
NewtonOutcome newton(const Context& ctx, cplx start, const ContourRegion& bound) {
  const auto& s = ctx.settings();
  NewtonOutcome out{start};
  for (int it = 0; it < s.newton_max_iterations; ++it) {
    const auto d = ctx.derivatives(out.z, 2);
    const cplx f = d.value[0], f1 = d.value[1], f2 = d.value[2];
    if (f == cplx{}) {
      out.last_step = 0.0;
      break;
    }
    const cplx denom = f1 * f1 - f * f2;
    if (denom == cplx{}) break;
    const cplx step = f * f1 / denom;
    out.z -= step;
    out.iterations = it + 1;
    out.last_step = std::abs(step);
    if (!bound.contains(out.z) || !std::isfinite(out.z.real()) || !std::isfinite(out.z.imag())) {
      out.escaped = true;
      break;
    }
    if (out.last_step < s.newton_step_tolerance * (1.0 + std::abs(out.z))) break;
  }
  out.converged = out.last_step < s.newton_step_tolerance * (1.0 + std::abs(out.z));
  return out;
}

// Winding and cluster mean on a circle, with node doubling until the winding is integral.
std::optional<ContourIntegral> circle(const Context& ctx, cplx center, double radius) {
  const auto& s = ctx.settings();
  std::size_t n = s.circle_nodes;
  std::optional<ContourIntegral> prev;
  for (int round = 0; round < 4; ++round, n *= 2) {
    ContourIntegral c;
    try {
      c = integrate_circle(ctx.pair, center, radius, n);
    } catch (const ContourError&) {
      return std::nullopt;
    }
    if (c.residual() <= s.contour.integer_tolerance && prev && prev->count() == c.count()) return c;
    prev = c;
  }
  return std::nullopt;
}

// Smallest |Delta| over the circle nodes, relative to the noise floor at the center.
bool healthy_circle(const Context& ctx, cplx center, double radius, double floor) {
  const std::size_t n = ctx.settings().circle_nodes;
  for (std::size_t j = 0; j < n; ++j) {
    const cplx z = center + std::polar(radius, 2.0 * std::numbers::pi * double(j) / double(n));
    if (!(std::abs(ctx.value(z)) > floor)) return false;
  }
  return true;
}

Eigenvalue refine_box(const Context& ctx, const Box& box, double isolation_radius) {
  const auto& s = ctx.settings();
  const int m = box.count;
  if (m < 1) throw PreconditionError("refine: box count must be positive");
  const double r_iso = isolation_radius > 0.0 ? std::min(isolation_radius, box.r.diameter()) : box.r.diameter();

  // Newton from the center; on escape, bisect toward the cluster.
  Box cur = box;
  NewtonOutcome nt;
  bool located = false;
  for (int round = 0; round < 16; ++round) {
    nt = newton(ctx, cur.r.center(), cur.r.scaled(2.0));
    if (!nt.escaped && cur.r.contains(nt.z) && (nt.converged || m > 1)) {
      located = true;
      break;
    }
    std::vector<Box> kids;
    try {
      kids = split(ctx, cur);
    } catch (const ClusteringError&) {
      break;
    }
    const auto it = std::find_if(kids.begin(), kids.end(), [m](const Box& b) { return b.count == m; });
    if (it == kids.end()) break;
    cur = *it;
  }
  if (!located) {
    if (cur.integral.evaluations == 0) cur.integral = integrate_rectangle(ctx.pair, cur.r, s.contour);
    nt.z = cur.integral.centroid();
    nt.last_step = cur.r.diameter();
    ctx.note("Newton left its box near " + fmt(box.r.center()) + "; using the contour mean");
  }

  Eigenvalue ev;
  ev.location = nt.z;
  ev.iterations = nt.iterations;

  // Cluster mean on the largest circle that still winds m times.
  if (m >= 2) {
    double r = r_iso;
    bool polished = false;
    for (int k = 0; k < 8 && !polished; ++k, r *= 0.5) {
      const auto c = circle(ctx, ev.location, r);
      if (c && c->count() == m) {
        ev.location = c->centroid();
        polished = true;
      }
    }
    if (!polished) ctx.note("cluster mean unavailable near " + fmt(ev.location));
  }

  // Multiplicity: winding on a small circle, grown while |Delta| there is at noise level.
  const auto d = ctx.derivatives(ev.location, 0);
  const double floor = ctx.noise_floor(d);
  double rho = std::max(10.0 * nt.last_step, 1e-8 * (1.0 + std::abs(ev.location)));
  rho = std::min(rho, r_iso);
  int winding = -1;
  for (;;) {
    if (healthy_circle(ctx, ev.location, rho, floor)) {
      const auto c = circle(ctx, ev.location, rho);
      if (c) {
        winding = c->count();
        ev.winding_radius = rho;
        ctx.record_residual(c->residual());
        if (winding == m) break;
      }
    }
    if (rho >= r_iso) break;
    rho = std::min(10.0 * rho, r_iso);
  }
  if (winding != m) {
    throw InconsistencyError("winding " + std::to_string(winding) + " around " + fmt(ev.location) +
                                 " disagrees with box count " + std::to_string(m),
                             winding, m);
  }
  ev.multiplicity = winding;
  if (winding > s.multiplicity_warning) {
    ctx.note("winding " + std::to_string(winding) + " at " + fmt(ev.location) + " exceeds " +
             std::to_string(s.multiplicity_warning) + "; possible contour pathology");
  }

  ev.residual = std::abs(ctx.value(ev.location));
  const auto edge = edge_clearance(ctx.value, box.r, s.contour);
  const double threshold = s.residual_factor * std::max(1.0, edge.median_abs);
  if (!(ev.residual <= threshold)) {
    throw AccuracyError("residual " + fmt(ev.residual) + " at " + fmt(ev.location) + " exceeds " + fmt(threshold));
  }
  return ev;
}

ZeroCount count_region(const Context& ctx, const ContourRegion& region) {
  return count_in_region(ctx.value, ctx.pair, region, ctx.settings().contour);
}

}  // namespace

int count_zeros(const Problem& problem, const ContourRegion& region, const ToleranceSettings& tol,
                const RootfinderSettings& settings) {
  const Context ctx(problem, tol, settings);
  return count_region(ctx, region).count;
}

std::vector<IsolatedBox> localize(const Problem& problem, const ContourRegion& region, const ToleranceSettings& tol,
                                  const RootfinderSettings& settings) {
  const Context ctx(problem, tol, settings);
  const auto zc = count_region(ctx, region);
  std::vector<IsolatedBox> out;
  if (zc.count == 0) return out;
  for (const auto& b : localize_boxes(ctx, {zc.region, zc.count, zc.integral},
                                      settings.isolation_fraction * region.diameter())) {
    out.push_back({b.r, b.count});
  }
  return out;
}

Eigenvalue refine(const Problem& problem, const IsolatedBox& box, const ToleranceSettings& tol,
                  const RootfinderSettings& settings, double isolation_radius) {
  const Context ctx(problem, tol, settings);
  if (!box.box.valid()) throw PreconditionError("refine: box bounds must be finite and well ordered");
  return refine_box(ctx, {box.box, box.count, {}}, isolation_radius);
}

SpectrumResult find_spectrum(const Problem& problem, const ContourRegion& region, const ToleranceSettings& tol,
                             const RootfinderSettings& settings) {
  if (!region.valid()) throw PreconditionError("find_spectrum: region bounds must be finite and well ordered");
  const Context ctx(problem, tol, settings);
  SpectrumResult result;
  result.region = region;

  ZeroCount zc;
  try {
    zc = count_region(ctx, region);
  } catch (const NumericalError& e) {
    throw ContourError(std::string("counting zeros in ") + fmt(region) + ": " + e.what());
  }
  result.total_count = zc.count;
  result.diagnostics.integrated_region = zc.region;
  result.diagnostics.perturbations = zc.perturbations;
  result.diagnostics.total_winding_residual = zc.integral.residual();
  if (zc.perturbations > 0) {
    ctx.note("region boundary too close to a zero; integrated over " + fmt(zc.region) + " after " +
             std::to_string(zc.perturbations) + " perturbation(s)");
  }
  if (zc.count == 0) {
    result.diagnostics.notes = ctx.take_notes();
    return result;
  }

  std::vector<Box> boxes;
  try {
    boxes = localize_boxes(ctx, {zc.region, zc.count, zc.integral}, settings.isolation_fraction * region.diameter());
  } catch (const NumericalError& e) {
    throw ClusteringError(std::string("localizing zeros in ") + fmt(region) + ": " + e.what());
  }

  auto isolation = [](const std::vector<Box>& bs, std::size_t i) {
    double r = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < bs.size(); ++j) {
      if (j != i) r = std::min(r, 0.45 * std::abs(bs[i].r.center() - bs[j].r.center()));
    }
    return r;
  };

  std::vector<std::vector<Eigenvalue>> found(boxes.size());
  parallel_for(boxes.size(), tol.threads, [&](std::size_t i) {
    try {
      found[i].push_back(refine_box(ctx, boxes[i], isolation(boxes, i)));
    } catch (const InconsistencyError& e) {
      if (boxes[i].count < 2) throw;
      ctx.note(std::string(e.what()) + "; subdividing further");
      const auto sub = localize_boxes(ctx, boxes[i], boxes[i].r.diameter() / 16.0);
      for (std::size_t j = 0; j < sub.size(); ++j) found[i].push_back(refine_box(ctx, sub[j], isolation(sub, j)));
    }
  });

  for (auto& f : found) result.eigenvalues.insert(result.eigenvalues.end(), f.begin(), f.end());
  std::sort(result.eigenvalues.begin(), result.eigenvalues.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
    if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  int total = 0;
  for (auto& e : result.eigenvalues) {
    total += e.multiplicity;
    e.separation = std::numeric_limits<double>::infinity();
    for (const auto& o : result.eigenvalues) {
      if (&o != &e) e.separation = std::min(e.separation, std::abs(o.location - e.location));
    }
    if (!region.contains(e.location)) {
      ctx.note("eigenvalue " + fmt(e.location) + " lies in the perturbed region only");
    }
  }
  if (total != zc.count) {
    throw InconsistencyError("multiplicities sum to " + std::to_string(total) + " but the region holds " +
                                 std::to_string(zc.count) + " zeros",
                             total, zc.count);
  }
  result.diagnostics.winding_residuals = ctx.take_residuals();
  result.diagnostics.notes = ctx.take_notes();
  return result;
}

double spectral_gap(const Problem& problem, const ContourRegion& search, const ToleranceSettings& tol,
                    const RootfinderSettings& settings) {
  if (!search.valid()) throw PreconditionError("spectral_gap: region bounds must be finite and well ordered");
  const double dx = std::max({search.re_min, 0.0 - search.re_max, 0.0});
  const double dy = std::max({search.im_min, 0.0 - search.im_max, 0.0});
  if (std::hypot(dx, dy) < 1e-6) {
    throw PreconditionError("spectral_gap: the search region must stay at least 1e-6 away from 0");
  }
  const auto spectrum = find_spectrum(problem, search, tol, settings);
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& e : spectrum.eigenvalues) {
    if (search.contains(e.location)) gap = std::min(gap, e.location.real());
  }
  if (!std::isfinite(gap)) throw NotFoundError("no eigenvalues in " + fmt(search) + "; enlarge the search region");
  return gap;
}

}  // namespace jumpspec
