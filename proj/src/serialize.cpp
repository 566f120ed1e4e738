#include "jumpspec/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "jumpspec/problem_io.hpp"

namespace jumpspec {

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

Json number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& field, double& out) {
  const std::string t = trim(field);
  if (t.empty()) return false;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

}  // namespace

std::string spectrum_csv(const SpectrumResult& result) {
  std::ostringstream os;
  os << "re,im,multiplicity,residual,separation,winding_radius\n";
  for (const auto& e : result.eigenvalues) {
    os << format_number(e.location.real()) << ',' << format_number(e.location.imag()) << ',' << e.multiplicity
       << ',' << format_number(e.residual) << ',' << format_number(e.separation) << ','
       << format_number(e.winding_radius) << '\n';
  }
  return os.str();
}

Json eigenvalue_json(const Eigenvalue& e) {
  return Json{{"re", e.location.real()},
              {"im", e.location.imag()},
              {"multiplicity", e.multiplicity},
              {"residual", number(e.residual)},
              {"separation", number(e.separation)},
              {"iterations", e.iterations},
              {"winding_radius", number(e.winding_radius)}};
}

Json region_json(const ContourRegion& r) { return Json::array({r.re_min, r.re_max, r.im_min, r.im_max}); }

Json spectrum_json(const SpectrumResult& result) {
  Json eigs = Json::array();
  for (const auto& e : result.eigenvalues) eigs.push_back(eigenvalue_json(e));
  const auto& d = result.diagnostics;
  return Json{{"region", region_json(result.region)},
              {"total_count", result.total_count},
              {"eigenvalues", std::move(eigs)},
              {"diagnostics",
               {{"integrated_region", region_json(d.integrated_region)},
                {"perturbations", d.perturbations},
                {"total_winding_residual", d.total_winding_residual},
                {"winding_residuals", d.winding_residuals},
                {"notes", d.notes}}}};
}

std::string grid_csv(const GridSample& grid) {
  std::ostringstream os;
  os << "re,im,re_delta,im_delta,abs_delta\n";
  for (std::size_t j = 0; j < grid.ny; ++j) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const cplx z = grid.lambda_at(i, j), v = grid.values[j * grid.nx + i];
      os << format_number(z.real()) << ',' << format_number(z.imag()) << ',' << format_number(v.real()) << ','
         << format_number(v.imag()) << ',' << format_number(std::abs(v)) << '\n';
    }
  }
  return os.str();
}

Json grid_json(const GridSample& grid) {
  Json re = Json::array(), im = Json::array();
  for (const auto& v : grid.values) {
    re.push_back(number(v.real()));
    im.push_back(number(v.imag()));
  }
  return Json{{"region", region_json(grid.rectangle)},
              {"nx", grid.nx},
              {"ny", grid.ny},
              {"layout", "row-major, index j*nx+i"},
              {"re_delta", std::move(re)},
              {"im_delta", std::move(im)}};
}

std::string sampled_csv(const SampledFunction& f) {
  std::ostringstream os;
  os << "x,re_f,im_f\n";
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    os << format_number(f.nodes[i]) << ',' << format_number(f.values[i].real()) << ','
       << format_number(f.values[i].imag()) << '\n';
  }
  return os.str();
}

Json sampled_json(const SampledFunction& f) {
  Json re = Json::array(), im = Json::array();
  for (const auto& v : f.values) {
    re.push_back(number(v.real()));
    im.push_back(number(v.imag()));
  }
  return Json{{"interpolation", "piecewise-cubic"}, {"x", f.nodes}, {"re_f", std::move(re)}, {"im_f", std::move(im)}};
}

SampledFunction parse_sampled_csv(const std::string& text) {
  SampledFunction f;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ls(t);
    for (std::string field; std::getline(ls, field, ',');) fields.push_back(field);
    double x = 0.0, re = 0.0, im = 0.0;
    const bool numeric = fields.size() >= 2 && parse_double(fields[0], x) && parse_double(fields[1], re) &&
                         (fields.size() < 3 || parse_double(fields[2], im));
    if (!numeric) {
      if (f.nodes.empty() && lineno == 1) continue;
      throw ParseError("function CSV line " + std::to_string(lineno) + ": expected x,re_f[,im_f]");
    }
    if (fields.size() > 3) throw ParseError("function CSV line " + std::to_string(lineno) + ": too many columns");
    f.nodes.push_back(x);
    f.values.emplace_back(re, im);
  }
  if (f.nodes.empty()) throw ParseError("function CSV contains no samples");
  return f;
}

}  // namespace jumpspec
