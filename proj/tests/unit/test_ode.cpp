#include <cmath>
#include <random>

#include "doctest.h"
#include "jumpspec/ode.hpp"
#include "jumpspec/problem_io.hpp"
#include "reference.hpp"

using namespace jumpspec;

namespace {

Problem constant_problem(double b0, double b1) {
  return Problem({Coefficient::constant(b0), Coefficient::constant(b1), BoundaryMeasure::dirac(0.5),
                  BoundaryMeasure::dirac(0.5)});
}

double rel(cplx a, cplx b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

}  // namespace

TEST_CASE("dense output of a scalar linear ODE") {
  const std::vector<double> mesh{0.0, 0.3, 1.0};
  auto rhs = [](std::size_t, double, std::span<const cplx> u, std::span<cplx> du) { du[0] = cplx(0, 3) * u[0]; };
  auto jump = [](std::size_t, std::span<cplx>) {};
  IntegratorStats stats;
  const auto t = integrate_dense(mesh, {1.0}, rhs, jump, {1e-11, 1e-13}, &stats);
  for (double x : {0.0, 0.1234, 0.3, 0.77, 1.0}) {
    CHECK(std::abs(t.eval_component(x, 0) - std::exp(cplx(0, 3) * x)) < 1e-9);
  }
  CHECK(stats.steps == t.step_count());
  bool has_node = false;
  for (double n : t.nodes()) has_node = has_node || n == 0.3;
  CHECK(has_node);
}

TEST_CASE("jumps at mesh nodes are right-continuous") {
  const std::vector<double> mesh{0.0, 0.5, 1.0};
  auto rhs = [](std::size_t, double, std::span<const cplx>, std::span<cplx> du) { du[0] = 1.0; };
  auto jump = [](std::size_t node, std::span<cplx> u) {
    if (node == 1) u[0] += 10.0;
  };
  const auto t = integrate_dense(mesh, {0.0}, rhs, jump, {});
  CHECK(std::abs(t.eval_component(0.4999999, 0) - 0.4999999) < 1e-12);
  CHECK(std::abs(t.eval_component(0.5, 0) - 10.5) < 1e-12);
  CHECK(std::abs(t.eval_component(1.0, 0) - 11.0) < 1e-12);
}

TEST_CASE("step underflow raises StiffnessError") {
  const std::vector<double> mesh{0.0, 1.0};
  auto rhs = [](std::size_t, double x, std::span<const cplx> u, std::span<cplx> du) {
    du[0] = u[0] * u[0] / std::max(1e-300, 0.5 - x);
  };
  auto jump = [](std::size_t, std::span<cplx>) {};
  CHECK_THROWS_AS(integrate_dense(mesh, {1.0}, rhs, jump, {}), StiffnessError);
}

TEST_CASE("closed-form basis against elementary functions") {
  // b0 = -1, b1 = 0: y1 = cos(s x), y2 = sin(s x) / s with s^2 = lambda
  for (cplx lambda : {cplx(0.0), cplx(1e-9, 0), cplx(39.0, 0.5), cplx(-400.0, 3.0), cplx(2500.0, -80.0)}) {
    const cplx s = std::sqrt(lambda);
    for (double x : {0.0, 0.2, 0.5, 1.0}) {
      const auto b = closed_form_basis(-1.0, 0.0, lambda, x);
      const cplx y2 = std::abs(s) < 1e-6 ? cplx(x) : std::sin(s * x) / s;
      CHECK(rel(b.y1, std::cos(s * x)) < 1e-13);
      CHECK(rel(b.y2, y2) < 1e-13);
      CHECK(rel(b.y1_prime, -s * s * y2) < 1e-13);
      CHECK(rel(b.y2_prime, std::cos(s * x)) < 1e-13);
    }
  }
  CHECK_THROWS_AS(closed_form_basis(1.0, 0.0, 1.0, 0.5), DomainError);
}

TEST_CASE("trig levels are continuous across the series threshold") {
  for (double x : {0.5, 1.0}) {
    const double edge = 4.0 / (x * x);
    for (cplx dir : {cplx(1, 0), cplx(0, 1), cplx(-0.6, 0.8)}) {
      const auto a = trig_levels(dir * edge * (1 - 1e-12), x, 2);
      const auto b = trig_levels(dir * edge * (1 + 1e-12), x, 2);
      for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(a.c[k] - b.c[k]) < 1e-11 * (1 + std::abs(a.c[k])));
        CHECK(std::abs(a.s[k] - b.s[k]) < 1e-11 * (1 + std::abs(a.s[k])));
      }
    }
  }
}

TEST_CASE("integrated basis matches the closed form") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const double b0 = -0.5 - std::abs(U(rng)), b1 = 2.0 * U(rng);
    const cplx lambda(2000.0 * U(rng), 2000.0 * U(rng));
    const auto p = constant_problem(b0, b1);
    const auto basis = integrate_basis(p, lambda);
    for (double x : {0.0, 0.13, 0.5, 0.77, 1.0}) {
      const auto a = eval_basis(basis, x);
      const auto e = closed_form_basis(b0, b1, lambda, x);
      CHECK(rel(a.y1, e.y1) < 1e-8);
      CHECK(rel(a.y2, e.y2) < 1e-8);
      CHECK(rel(a.y1_prime, e.y1_prime) < 1e-8);
      CHECK(rel(a.y2_prime, e.y2_prime) < 1e-8);
      CHECK(rel(a.y1_dlambda, e.y1_dlambda) < 1e-8);
      CHECK(rel(a.y2_dlambda, e.y2_dlambda) < 1e-8);
    }
  }
}

TEST_CASE("lambda-derivatives against central differences") {
  const double b0 = -1.3, b1 = 0.7;
  for (cplx lambda : {cplx(10.0, 2.0), cplx(-300.0, 40.0), cplx(900.0, -5.0)}) {
    const double h = 1e-4 * (1.0 + std::abs(lambda));
    for (double x : {0.3, 1.0}) {
      const auto d = closed_form_basis(b0, b1, lambda, x);
      const auto p = closed_form_basis(b0, b1, lambda + h, x);
      const auto m = closed_form_basis(b0, b1, lambda - h, x);
      CHECK(rel(d.y1_dlambda, (p.y1 - m.y1) / (2 * h)) < 1e-6);
      CHECK(rel(d.y2_dlambda, (p.y2 - m.y2) / (2 * h)) < 1e-6);
      CHECK(rel(d.y1_prime_dlambda, (p.y1_prime - m.y1_prime) / (2 * h)) < 1e-6);
      CHECK(rel(d.y2_prime_dlambda, (p.y2_prime - m.y2_prime) / (2 * h)) < 1e-6);
    }
  }
}

TEST_CASE("variable coefficients against an independent integrator") {
  const Problem p(load_problem_file(ref::data_path("variable_density.json")).spec);
  for (cplx lambda : {cplx(0.0), cplx(25.0, -3.0), cplx(-150.0, 60.0)}) {
    const auto basis = integrate_basis(p, lambda);
    const auto shot = ref::shoot_reference(p, lambda);
    for (std::size_t i = 0; i < shot.x.size(); ++i) {
      const auto a = eval_basis(basis, shot.x[i]);
      CHECK(rel(a.y1, shot.u[i][0]) < 1e-8);
      CHECK(rel(a.y1_prime, shot.u[i][1]) < 1e-8);
      CHECK(rel(a.y2, shot.u[i][2]) < 1e-8);
      CHECK(rel(a.y2_prime, shot.u[i][3]) < 1e-8);
    }
  }
}

TEST_CASE("carried Wronskian follows Abel's formula") {
  const Problem p(load_problem_file(ref::data_path("smooth_variable.json")).spec);
  ShootingLayout layout{0, false, true};
  const auto t = shoot(p, cplx(30.0, 1.0), layout, {});
  for (double x : {0.0, 0.5, 1.0}) {
    cplx u[5];
    t.eval(x, u);
    const cplx direct = u[0] * u[3] - u[2] * u[1];
    CHECK(rel(u[4], direct) < 1e-8);
    CHECK(rel(u[4], wronskian(p, x)) < 1e-8);
  }
}

TEST_CASE("evaluation outside [0,1] is a domain error") {
  const auto basis = integrate_basis(constant_problem(-1.0, 0.0), 1.0);
  CHECK_THROWS_AS(eval_basis(basis, 1.5), DomainError);
  CHECK_THROWS_AS(eval_basis(basis, -0.1), DomainError);
}
