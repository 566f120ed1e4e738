#include <cmath>
#include <limits>

#include "doctest.h"
#include "jumpspec/problem_io.hpp"
#include "jumpspec/serialize.hpp"

using namespace jumpspec;

TEST_CASE("numbers round-trip at 17 digits") {
  for (double x : {0.1, 1.0 / 3.0, 39.478417604357432, -1e-300, 6.02214076e23}) {
    CHECK(std::stod(format_number(x)) == x);
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("spectrum CSV and JSON") {
  SpectrumResult r;
  r.region = {1.0, 2.0, -1.0, 1.0};
  r.total_count = 3;
  Eigenvalue e;
  e.location = {1.5, -0.25};
  e.multiplicity = 3;
  e.residual = 1e-12;
  e.separation = std::numeric_limits<double>::infinity();
  r.eigenvalues.push_back(e);
  CHECK(spectrum_csv(r) ==
        "re,im,multiplicity,residual,separation,winding_radius\n1.5,-0.25,3,9.9999999999999998e-13,inf,0\n");
  const auto j = spectrum_json(r);
  CHECK(j["total_count"] == 3);
  CHECK(j["eigenvalues"][0]["multiplicity"] == 3);
  CHECK(j["eigenvalues"][0]["separation"].is_null());
  CHECK(j["region"][3] == 1.0);
}

TEST_CASE("grid CSV is row-major in the imaginary direction") {
  GridSample g{{0.0, 1.0, 0.0, 2.0}, 2, 2, {1.0, 2.0, cplx(3.0, 4.0), 0.0}};
  CHECK(grid_csv(g) == "re,im,re_delta,im_delta,abs_delta\n0,0,1,0,1\n1,0,2,0,2\n0,2,3,4,5\n1,2,0,0,0\n");
  CHECK(grid_json(g)["im_delta"][2] == 4.0);
}

TEST_CASE("function CSV round trip") {
  SampledFunction f{{0.0, 0.5, 1.0}, {1.0, cplx(0.1, -2.0), 3.0}};
  const auto back = parse_sampled_csv(sampled_csv(f));
  CHECK(back.nodes == f.nodes);
  CHECK(back.values == f.values);
  const auto two = parse_sampled_csv("# comment\n0,1\n\n1,2\n");
  CHECK(two.values[1] == cplx(2.0));
  CHECK_THROWS_AS(parse_sampled_csv("x,re_f,im_f\n0,a,1\n"), ParseError);
  CHECK_THROWS_AS(parse_sampled_csv(""), ParseError);
  CHECK_THROWS_AS(parse_sampled_csv("0,1,2,3\n"), ParseError);
}
