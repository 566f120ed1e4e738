#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "jumpspec/cli.hpp"
#include "json.hpp"
#include "reference.hpp"

using namespace jumpspec;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "jumpspec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> rows(const std::string& csv) {
  std::vector<std::vector<double>> r;
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    std::vector<double> v;
    std::stringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) v.push_back(f == "inf" ? INFINITY : std::stod(f));
    r.push_back(v);
  }
  return r;
}

const std::string half = ref::data_path("dexin_half.json");
const double p2 = ref::pi * ref::pi;

}  // namespace

TEST_CASE("validate") {
  CHECK(run({"validate", half}).code == kExitOk);
  CHECK(run({"validate", half}).out.empty());
  const auto bad = run({"validate", ref::data_path("invalid_mass.json")});
  CHECK(bad.code == kExitValidation);
  CHECK(std::count(bad.out.begin(), bad.out.end(), '\n') == 1);
  CHECK(run({"validate", ref::data_path("malformed.json")}).code == kExitParse);
  CHECK(run({"validate", "/nonexistent.json"}).code == kExitParse);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitParse);
  CHECK(run({"eigs", half, "--format", "xml", "--region", "1", "2", "3", "4"}).code == kExitParse);
  CHECK(run({"eigs", half}).code == kExitValidation);
  CHECK(run({"eigs", half, "--region", "2", "1", "0", "1"}).code == kExitValidation);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("eigs") {
  const auto r = run({"eigs", half, "--region", "1", "400", "-1", "1"});
  REQUIRE(r.code == kExitOk);
  const auto t = rows(r.out);
  REQUIRE(t.size() == 3);
  CHECK(t[1][2] == 3);
  CHECK(std::abs(t[1][0] - 16 * p2) < 1e-8 * 16 * p2);

  const auto j = nlohmann::json::parse(run({"eigs", half, "--region", "1", "400", "-1", "1", "--format", "json-doc"}).out);
  CHECK(j["total_count"] == 5);
  CHECK(j["eigenvalues"].size() == 3);

  const auto empty = run({"eigs", half, "--region", "50", "100", "-1", "1"});
  CHECK(empty.code == kExitOk);
  CHECK(rows(empty.out).empty());

  const auto edge = nlohmann::json::parse(
      run({"eigs", half, "--region", "39.478417604357432", "100", "-1", "1", "--format", "json-doc"}).out);
  CHECK(edge["diagnostics"]["perturbations"] >= 1);
  CHECK(edge["diagnostics"]["notes"].size() >= 1);
  CHECK(edge["eigenvalues"].size() == 1);
}

TEST_CASE("oracle spectra use the same schema") {
  const auto r = run({"eigs", half, "--region", "1", "400", "-1", "1", "--oracle", "dexin"});
  REQUIRE(r.code == kExitOk);
  const auto t = rows(r.out);
  REQUIRE(t.size() == 3);
  CHECK(t[1][2] == 3);
  CHECK(run({"eigs", half, "--region", "1", "400", "-1", "1", "--oracle", "de"}).code == kExitOk);
  CHECK(run({"eigs", ref::data_path("de_b1_one.json"), "--region", "1", "400", "-1", "1", "--oracle", "dexin"}).code ==
        kExitValidation);
}

TEST_CASE("mult") {
  const auto r = run({"mult", half, "--lambda", "157.9", "0"});
  REQUIRE(r.code == kExitOk);
  CHECK(rows(r.out)[0][2] == 3);
  const auto z = run({"mult", ref::data_path("variable_density.json"), "--lambda", "0", "0"});
  REQUIRE(z.code == kExitOk);
  CHECK(rows(z.out)[0][2] == 1);
  CHECK(run({"mult", half, "--lambda", "50", "0"}).code == kExitNotFound);
}

TEST_CASE("grid, resolve, gap") {
  const auto g = run({"grid", half, "--region", "0", "1", "0", "1", "--nx", "2", "--ny", "2"});
  REQUIRE(g.code == kExitOk);
  int zeros = 0;
  for (const auto& row : rows(g.out)) zeros += row[4] < 1e-12;
  CHECK(zeros == 1);

  const auto r = run({"resolve", half, "--lambda", "1", "0", "--f-const", "0"});
  REQUIRE(r.code == kExitOk);
  const auto t = rows(r.out);
  CHECK(t.size() == 257);
  for (const auto& row : t) CHECK((row[1] == 0.0 && row[2] == 0.0));
  CHECK(run({"resolve", half, "--lambda", "39.478417604357432", "0", "--f-const", "1"}).code == kExitNumerical);

  const auto gap = run({"gap", ref::data_path("de_b1_zero.json"), "--format", "json-doc"});
  REQUIRE(gap.code == kExitOk);
  const auto j = nlohmann::json::parse(gap.out);
  CHECK(j["method"] == "closed-form");
  CHECK(std::abs(j["gap"].get<double>() - 4 * p2) < 1e-12);
  const auto search = nlohmann::json::parse(
      run({"gap", ref::data_path("variable_density.json"), "--region", "1", "200", "-20", "20", "--format", "json-doc"}).out);
  CHECK(search["method"] == "search");
  CHECK(run({"gap", ref::data_path("variable_density.json")}).code == kExitValidation);
}

TEST_CASE("output file and determinism") {
  const auto path = std::filesystem::temp_directory_path() / "jumpspec_cli_test.csv";
  REQUIRE(run({"eigs", half, "--region", "1", "400", "-1", "1", "--out", path.string()}).code == kExitOk);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == run({"eigs", half, "--region", "1", "400", "-1", "1"}).out);
  CHECK(run({"eigs", half, "--region", "1", "400", "-1", "1", "--threads", "1"}).out ==
        run({"eigs", half, "--region", "1", "400", "-1", "1", "--threads", "4"}).out);
  std::filesystem::remove(path);
}
