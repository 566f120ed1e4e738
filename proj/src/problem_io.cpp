#include "jumpspec/problem_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace jumpspec {

using nlohmann::json;

namespace {

void flag_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where,
                  std::vector<Violation>& out) {
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) out.push_back({where.empty() ? key : where + "." + key, "unknown key"});
  }
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing member \"" + key + "\"");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Coefficient parse_coefficient(const json& j, const std::string& where, std::vector<Violation>& out) {
  const auto& type = member(j, "type", where);
  if (!type.is_string()) throw ParseError(where + ".type: expected a string");
  const auto t = type.get<std::string>();
  if (t == "constant") {
    flag_unknown(j, {"type", "value"}, where, out);
    return Coefficient::constant(number(member(j, "value", where), where + ".value"));
  }
  if (t == "piecewise") {
    flag_unknown(j, {"type", "breakpoints", "polys"}, where, out);
    auto bp = numbers(member(j, "breakpoints", where), where + ".breakpoints");
    const auto& polys = member(j, "polys", where);
    if (!polys.is_array()) throw ParseError(where + ".polys: expected an array");
    std::vector<std::vector<double>> ps;
    for (std::size_t i = 0; i < polys.size(); ++i) {
      ps.push_back(numbers(polys[i], where + ".polys[" + std::to_string(i) + "]"));
    }
    return Coefficient::piecewise(std::move(bp), std::move(ps));
  }
  throw ParseError(where + ".type: expected \"constant\" or \"piecewise\"");
}

BoundaryMeasure parse_measure(const json& j, const std::string& where, std::vector<Violation>& out) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  flag_unknown(j, {"atoms", "density"}, where, out);
  BoundaryMeasure m;
  if (const auto it = j.find("atoms"); it != j.end()) {
    if (!it->is_array()) throw ParseError(where + ".atoms: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& a = (*it)[i];
      const std::string w = where + ".atoms[" + std::to_string(i) + "]";
      if (!a.is_object()) throw ParseError(w + ": expected an object");
      flag_unknown(a, {"x", "w"}, w, out);
      m.atoms.push_back({number(member(a, "x", w), w + ".x"), number(member(a, "w", w), w + ".w")});
    }
  }
  if (const auto it = j.find("density"); it != j.end() && !it->is_null()) {
    const std::string w = where + ".density";
    if (!it->is_object()) throw ParseError(w + ": expected an object");
    flag_unknown(*it, {"breakpoints", "values"}, w, out);
    m.density = Density{numbers(member(*it, "breakpoints", w), w + ".breakpoints"),
                        numbers(member(*it, "values", w), w + ".values")};
  }
  return m;
}

json coefficient_json(const Coefficient& c) {
  if (c.is_constant()) return {{"type", "constant"}, {"value", c.value}};
  return {{"type", "piecewise"}, {"breakpoints", c.breakpoints}, {"polys", c.polys}};
}

json measure_json(const BoundaryMeasure& m) {
  json atoms = json::array();
  for (const auto& a : m.atoms) atoms.push_back({{"x", a.x}, {"w", a.w}});
  json out = {{"atoms", atoms}};
  if (m.density) out["density"] = {{"breakpoints", m.density->breakpoints}, {"values", m.density->values}};
  return out;
}

}  // namespace

ParsedProblem parse_problem(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("document: expected an object");

  ParsedProblem p;
  flag_unknown(doc, {"version", "b0", "b1", "nu0", "nu1"}, "", p.schema_violations);
  if (const auto it = doc.find("version"); it == doc.end()) {
    p.schema_violations.push_back({"version", "missing"});
  } else if (!it->is_number_integer() || it->get<long long>() != kProblemFormatVersion) {
    p.schema_violations.push_back({"version", "unsupported version (expected integer 1)"});
  }
  p.spec.b0 = parse_coefficient(member(doc, "b0", "document"), "b0", p.schema_violations);
  p.spec.b1 = parse_coefficient(member(doc, "b1", "document"), "b1", p.schema_violations);
  p.spec.nu0 = parse_measure(member(doc, "nu0", "document"), "nu0", p.schema_violations);
  p.spec.nu1 = parse_measure(member(doc, "nu1", "document"), "nu1", p.schema_violations);
  return p;
}

ParsedProblem load_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

ValidationReport validate_document(const ParsedProblem& parsed, double b0_floor) {
  ValidationReport r;
  r.violations = parsed.schema_violations;
  auto rest = validate(parsed.spec, b0_floor);
  r.violations.insert(r.violations.end(), rest.violations.begin(), rest.violations.end());
  return r;
}

std::string problem_to_json(const ProblemSpec& spec) {
  json doc = {{"version", kProblemFormatVersion},
              {"b0", coefficient_json(spec.b0)},
              {"b1", coefficient_json(spec.b1)},
              {"nu0", measure_json(spec.nu0)},
              {"nu1", measure_json(spec.nu1)}};
  return doc.dump(2);
}

}  // namespace jumpspec
