#include <cmath>

#include "doctest.h"
#include "jumpspec/oracles.hpp"
#include "reference.hpp"

using namespace jumpspec;

TEST_CASE("dexin determinant matches the trigonometric form") {
  for (double a : {0.5, 0.3, 0.9}) {
    for (cplx lambda : {cplx(0.0), cplx(1e-7, 0.0), cplx(50.0, 3.0), cplx(-400.0, 1.0), cplx(3000.0, -20.0)}) {
      const cplx want = ref::dexin_delta(a, lambda);
      CHECK(std::abs(dexin_delta({a}, lambda) - want) < 1e-12 * (1 + std::abs(want)));
    }
  }
}

TEST_CASE("dexin spectrum: rational and irrational a") {
  const double p2 = ref::pi * ref::pi;
  const auto half = dexin_spectrum({0.5}, 400.0);
  REQUIRE(half.size() == 4);
  CHECK(half[0].lambda == 0.0);
  CHECK(half[1].lambda.real() == doctest::Approx(4 * p2));
  CHECK(half[1].multiplicity == 1);
  CHECK(half[2].lambda.real() == doctest::Approx(16 * p2));
  CHECK(half[2].multiplicity == 3);
  CHECK(half[3].lambda.real() == doctest::Approx(36 * p2));

  const auto third = dexin_spectrum({1.0 / 3.0}, 400.0);
  int triples = 0;
  for (const auto& e : third) {
    if (e.multiplicity == 3) {
      ++triples;
      CHECK(e.lambda.real() == doctest::Approx(36 * p2));
    }
  }
  CHECK(triples == 1);

  for (const auto& e : dexin_spectrum({1.0 / std::sqrt(2.0)}, 600.0)) CHECK(e.multiplicity == 1);
  CHECK_THROWS_AS(dexin_spectrum({1.5}, 10.0), DomainError);
}

TEST_CASE("de determinant in the shifted variable") {
  const DeSpec s{-1.3, 0.8};
  for (cplx u : {cplx(0.0), cplx(5.0, 1.0), cplx(-30.0, 4.0), cplx(900.0, 0.0)}) {
    const cplx want = ref::de_delta_tilde(s.b0, s.b1, u);
    CHECK(std::abs(de_delta_tilde(s, u) - want) < 1e-12 * (1 + std::abs(want)));
  }
  // u = 0 is lambda = -b0 q, not an eigenvalue unless b1 = 0
  CHECK(std::abs(de_delta_tilde(s, 0.0)) > 1e-3);
}

TEST_CASE("de spectrum are zeros of the shifted determinant") {
  const DeSpec s{-1.0, 1.0};
  const double q = 0.25;
  const auto eigs = de_spectrum(s, 3);
  CHECK(eigs.front().lambda == 0.0);
  for (const auto& e : eigs) {
    const cplx u = -e.lambda / s.b0 - q;
    CHECK(std::abs(ref::de_delta_tilde(s.b0, s.b1, u)) < 1e-9 * (1 + std::abs(e.lambda)));
    CHECK(e.multiplicity == 1);
  }
  CHECK_THROWS_AS(de_spectrum({-1.0, 0.0}, 3), PreconditionError);
}

TEST_CASE("de gap has two branches") {
  const double p2 = ref::pi * ref::pi;
  CHECK(de_gap({-1.0, 0.0}) == doctest::Approx(4 * p2));
  CHECK(de_gap({-1.0, 10.0}) == doctest::Approx(4 * p2 + 25.0));
  CHECK(de_gap({-1.0, 30.0}) == doctest::Approx(16 * p2));
  const double b = 4.0 * std::sqrt(3.0) * ref::pi;
  CHECK(de_gap({-1.0, b}) == doctest::Approx(16 * p2));
  for (double b1 : {0.0, 5.0, 21.0, 22.0, 40.0}) CHECK(de_gap({-1.0, b1}) == doctest::Approx(ref::de_gap(-1.0, b1)));
}

TEST_CASE("shape recognition") {
  CHECK(match_de(de_problem({-2.0, 3.0})).has_value());
  CHECK(match_de(de_problem({-2.0, 3.0}))->b1 == 3.0);
  CHECK_FALSE(match_de(dexin_problem({0.3})).has_value());
  CHECK(match_dexin(dexin_problem({0.3}))->a == 0.3);
  CHECK_FALSE(match_dexin(de_problem({-1.0, 1.0})).has_value());
  CHECK(match_dexin(de_problem({-1.0, 0.0}))->a == 0.5);
}
