#include "jumpspec/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jumpspec/characteristic.hpp"
#include "jumpspec/oracles.hpp"
#include "jumpspec/problem_io.hpp"
#include "jumpspec/resolvent.hpp"
#include "jumpspec/rootfinder.hpp"
#include "jumpspec/serialize.hpp"

namespace jumpspec {

namespace {

enum class Format { csv, json };
enum class OracleKind { none, dexin, de };
enum class ResolventKind { full, dirichlet, tilde };

struct RunConfig {
  std::string problem_path;
  std::vector<double> region;
  std::vector<double> lambda;
  ToleranceSettings tol;
  std::string route = "auto";
  std::string out_path;
  Format format = Format::csv;
  OracleKind oracle = OracleKind::none;
  std::size_t nx = 50, ny = 50;
  std::optional<double> f_const;
  std::string f_path;
  std::size_t samples = kDefaultSamples;
  ResolventKind kind = ResolventKind::full;
  bool force_search = false;
};

class Failure : public std::runtime_error {
 public:
  Failure(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

ContourRegion region_of(const RunConfig& cfg) {
  if (cfg.region.size() != 4) throw Failure(kExitValidation, "--region RE_MIN RE_MAX IM_MIN IM_MAX is required");
  const ContourRegion r{cfg.region[0], cfg.region[1], cfg.region[2], cfg.region[3]};
  if (!r.valid()) throw Failure(kExitValidation, "--region bounds must be finite and well ordered");
  return r;
}

cplx lambda_of(const RunConfig& cfg) {
  if (cfg.lambda.size() != 2) throw Failure(kExitValidation, "--lambda RE IM is required");
  return {cfg.lambda[0], cfg.lambda[1]};
}

ParsedProblem load(const RunConfig& cfg) { return load_problem_file(cfg.problem_path); }

Problem checked_problem(const RunConfig& cfg) {
  const auto parsed = load(cfg);
  const auto report = validate_document(parsed);
  if (!report.ok()) throw InvalidProblem(report);
  return Problem(parsed.spec);
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out_path, std::ios::binary);
  if (!f) throw Failure(kExitValidation, "cannot open output file " + cfg.out_path);
  f << text;
}

std::string document(Json j) { return j.dump(2) + "\n"; }

void print_report(const ValidationReport& report, std::ostream& err) {
  for (const auto& v : report.violations) err << v.field << ": " << v.rule << "\n";
}

// --- subcommands ----------------------------------------------------------

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const auto report = validate_document(load(cfg));
  for (const auto& v : report.violations) out << v.field << ": " << v.rule << "\n";
  return report.ok() ? kExitOk : kExitValidation;
}

SpectrumResult oracle_spectrum(const Problem& problem, const ContourRegion& region, OracleKind kind) {
  const auto& spec = problem.spec();
  std::vector<OracleEigenvalue> eigs;
  std::string name;
  auto de = match_de(spec);
  auto dexin = match_dexin(spec);
  if (kind == OracleKind::de && de && de->b1 == 0.0) {
    dexin = DexinSpec{0.5};
    kind = OracleKind::dexin;
  }
  if (kind == OracleKind::dexin) {
    if (!dexin) throw Failure(kExitValidation, "problem does not have the dexin shape (b0=-1, b1=0, nu0=nu1=delta_a)");
    if (region.re_max > 0.0) eigs = dexin_spectrum(*dexin, region.re_max);
    name = "dexin";
  } else {
    if (!de) throw Failure(kExitValidation, "problem does not have the de shape (constant b0<0, nu0=nu1=delta_1/2)");
    const double unit = -4.0 * de->b0 * std::numbers::pi * std::numbers::pi;
    const int n_max = 1 + static_cast<int>(std::ceil(std::sqrt(std::max(region.re_max, 0.0) / unit)));
    eigs = de_spectrum(*de, n_max);
    name = "de";
  }

  SpectrumResult r;
  r.region = region;
  r.diagnostics.integrated_region = region;
  r.diagnostics.notes.push_back("oracle: " + name);
  for (const auto& e : eigs) {
    if (!region.contains(e.lambda)) continue;
    Eigenvalue v;
    v.location = e.lambda;
    v.multiplicity = e.multiplicity;
    r.eigenvalues.push_back(v);
    r.total_count += e.multiplicity;
  }
  std::sort(r.eigenvalues.begin(), r.eigenvalues.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
    return a.location.real() != b.location.real() ? a.location.real() < b.location.real()
                                                  : a.location.imag() < b.location.imag();
  });
  for (auto& a : r.eigenvalues) {
    a.separation = std::numeric_limits<double>::infinity();
    for (const auto& b : r.eigenvalues) {
      if (&a != &b) a.separation = std::min(a.separation, std::abs(a.location - b.location));
    }
  }
  return r;
}

int cmd_eigs(const RunConfig& cfg, std::ostream& out) {
  const Problem problem = checked_problem(cfg);
  const ContourRegion region = region_of(cfg);
  const bool oracle = cfg.oracle != OracleKind::none;
  const SpectrumResult r = oracle ? oracle_spectrum(problem, region, cfg.oracle) : find_spectrum(problem, region, cfg.tol);
  if (cfg.format == Format::csv) {
    emit(cfg, out, spectrum_csv(r));
  } else {
    Json j{{"command", "eigs"}, {"method", oracle ? "oracle" : "argument-principle"}};
    j.update(spectrum_json(r));
    emit(cfg, out, document(std::move(j)));
  }
  return kExitOk;
}

int cmd_mult(const RunConfig& cfg, std::ostream& out) {
  const Problem problem = checked_problem(cfg);
  const cplx guess = lambda_of(cfg);
  const ContourRegion box = ContourRegion::square(guess, 1e-2 * (1.0 + std::abs(guess)));
  const auto spectrum = find_spectrum(problem, box, cfg.tol);
  const Eigenvalue* best = nullptr;
  for (const auto& e : spectrum.eigenvalues) {
    if (!box.contains(e.location)) continue;
    if (!best || std::abs(e.location - guess) < std::abs(best->location - guess)) best = &e;
  }
  if (!best) {
    std::ostringstream os;
    os << "no eigenvalue within " << format_number(1e-2 * (1.0 + std::abs(guess))) << " of the given point";
    throw NotFoundError(os.str());
  }
  if (cfg.format == Format::csv) {
    SpectrumResult single;
    single.eigenvalues.push_back(*best);
    emit(cfg, out, spectrum_csv(single));
  } else {
    Json j{{"command", "mult"}, {"search_box", region_json(box)}, {"eigenvalue", eigenvalue_json(*best)}};
    emit(cfg, out, document(std::move(j)));
  }
  return kExitOk;
}

int cmd_grid(const RunConfig& cfg, std::ostream& out) {
  const Problem problem = checked_problem(cfg);
  const auto g = delta_grid(problem, region_of(cfg), cfg.nx, cfg.ny, cfg.tol);
  if (cfg.format == Format::csv) {
    emit(cfg, out, grid_csv(g));
  } else {
    Json j{{"command", "grid"}};
    j.update(grid_json(g));
    emit(cfg, out, document(std::move(j)));
  }
  return kExitOk;
}

SampledFunction rhs_of(const RunConfig& cfg) {
  if (cfg.f_const && !cfg.f_path.empty()) throw Failure(kExitValidation, "give either --f-const or --f, not both");
  if (cfg.f_const) return SampledFunction::constant(*cfg.f_const, cfg.samples);
  if (cfg.f_path.empty()) throw Failure(kExitValidation, "a right-hand side is required (--f FILE or --f-const C)");
  std::ifstream in(cfg.f_path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + cfg.f_path);
  std::ostringstream text;
  text << in.rdbuf();
  auto f = parse_sampled_csv(text.str());
  f.check();
  return f;
}

int cmd_resolve(const RunConfig& cfg, std::ostream& out) {
  const Problem problem = checked_problem(cfg);
  const cplx lambda = lambda_of(cfg);
  const SampledFunction f = rhs_of(cfg);
  SampledFunction u;
  const char* kind = "full";
  switch (cfg.kind) {
    case ResolventKind::full: u = resolvent_apply(problem, lambda, f, cfg.tol); break;
    case ResolventKind::dirichlet:
      u = green_dirichlet_apply(problem, lambda, f, cfg.tol);
      kind = "dirichlet";
      break;
    case ResolventKind::tilde:
      u = tilde_resolvent_apply(problem, lambda, f, cfg.tol);
      kind = "tilde";
      break;
  }
  if (cfg.format == Format::csv) {
    emit(cfg, out, sampled_csv(u));
  } else {
    Json j{{"command", "resolve"}, {"kind", kind}, {"lambda", {lambda.real(), lambda.imag()}}};
    j.update(sampled_json(u));
    emit(cfg, out, document(std::move(j)));
  }
  return kExitOk;
}

int cmd_gap(const RunConfig& cfg, std::ostream& out) {
  const Problem problem = checked_problem(cfg);
  const auto de = match_de(problem.spec());
  double gap = 0.0;
  std::string method;
  if (de && !cfg.force_search) {
    gap = de_gap(*de);
    method = "closed-form";
  } else {
    if (cfg.region.empty()) throw Failure(kExitValidation, "--region is required for the search-based gap");
    gap = spectral_gap(problem, region_of(cfg), cfg.tol);
    method = "search";
  }
  if (cfg.format == Format::csv) {
    emit(cfg, out, "gap,method\n" + format_number(gap) + "," + method + "\n");
  } else {
    emit(cfg, out, document(Json{{"command", "gap"}, {"gap", gap}, {"method", method}}));
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eigenvalues, multiplicities and resolvents of b0 y'' + b1 y' with nonlocal boundary conditions",
               "jumpspec"};
  app.require_subcommand(1, 1);
  RunConfig cfg;
  std::string format = "csv", oracle, kind = "full";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("problem", cfg.problem_path, "problem description (JSON)")->required();
    sub->add_option("--rtol", cfg.tol.rtol, "integrator relative tolerance")->capture_default_str();
    sub->add_option("--atol", cfg.tol.atol, "integrator absolute tolerance")->capture_default_str();
    sub->add_option("--threads", cfg.tol.threads, "worker threads (0: all cores)");
    sub->add_option("--route", cfg.route, "basis evaluation")
        ->check(CLI::IsMember({"auto", "integrate", "closed"}))
        ->capture_default_str();
    sub->add_option("--out", cfg.out_path, "write results to this file");
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json-doc"}))
        ->capture_default_str();
  };
  auto add_region = [&](CLI::App* sub) {
    sub->add_option("--region", cfg.region, "RE_MIN RE_MAX IM_MIN IM_MAX")->expected(4);
  };
  auto add_lambda = [&](CLI::App* sub) {
    sub->add_option("--lambda", cfg.lambda, "RE IM")->expected(2)->required();
  };

  auto* validate_cmd = app.add_subcommand("validate", "check a problem file");
  validate_cmd->add_option("problem", cfg.problem_path, "problem description (JSON)")->required();

  auto* eigs = app.add_subcommand("eigs", "eigenvalues with multiplicities in a rectangle");
  add_common(eigs);
  add_region(eigs);
  eigs->add_option("--oracle", oracle, "closed-form reference instead of the search")
      ->check(CLI::IsMember({"dexin", "de"}));

  auto* mult = app.add_subcommand("mult", "multiplicity of the eigenvalue near a point");
  add_common(mult);
  add_lambda(mult);

  auto* grid = app.add_subcommand("grid", "characteristic determinant on a rectangular grid");
  add_common(grid);
  add_region(grid);
  grid->add_option("--nx", cfg.nx, "samples along the real axis")->capture_default_str();
  grid->add_option("--ny", cfg.ny, "samples along the imaginary axis")->capture_default_str();

  auto* resolve = app.add_subcommand("resolve", "apply a resolvent to a sampled right-hand side");
  add_common(resolve);
  add_lambda(resolve);
  resolve->add_option("--f", cfg.f_path, "right-hand side CSV (x,re_f,im_f)");
  resolve->add_option("--f-const", cfg.f_const, "constant right-hand side");
  resolve->add_option("--samples", cfg.samples, "uniform nodes for --f-const")->capture_default_str();
  resolve->add_option("--kind", kind, "which resolvent")
      ->check(CLI::IsMember({"full", "dirichlet", "tilde"}))
      ->capture_default_str();

  auto* gap = app.add_subcommand("gap", "spectral gap: smallest real part of a nonzero eigenvalue");
  add_common(gap);
  add_region(gap);
  gap->add_flag("--search", cfg.force_search, "use the search even when a closed form exists");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitOk : kExitParse;
  }

  cfg.format = format == "csv" ? Format::csv : Format::json;
  cfg.oracle = oracle == "dexin" ? OracleKind::dexin : oracle == "de" ? OracleKind::de : OracleKind::none;
  cfg.kind = kind == "dirichlet" ? ResolventKind::dirichlet
             : kind == "tilde"   ? ResolventKind::tilde
                                 : ResolventKind::full;
  cfg.tol.route = cfg.route == "integrate" ? BasisRoute::integrate
                  : cfg.route == "closed"  ? BasisRoute::closed_form
                                           : BasisRoute::automatic;

  try {
    if (validate_cmd->parsed()) return cmd_validate(cfg, out);
    if (eigs->parsed()) return cmd_eigs(cfg, out);
    if (mult->parsed()) return cmd_mult(cfg, out);
    if (grid->parsed()) return cmd_grid(cfg, out);
    if (resolve->parsed()) return cmd_resolve(cfg, out);
    if (gap->parsed()) return cmd_gap(cfg, out);
  } catch (const Failure& e) {
    err << "error: " << e.what() << "\n";
    return e.code();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const InvalidProblem& e) {
    err << "invalid problem:\n";
    print_report(e.report(), err);
    return kExitValidation;
  } catch (const NotFoundError& e) {
    err << "not found: " << e.what() << "\n";
    return kExitNotFound;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitParse;
}

}  // namespace jumpspec
