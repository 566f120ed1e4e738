#pragma once

// Closed-form references for the two explicitly solvable families:
//
//   dexin: b0 = -1, b1 = 0, y(0) = y(a) = y(1)
//   de:    constant b0 < 0, b1, y(0) = y(1/2) = y(1)

#include <optional>
#include <vector>

#include "jumpspec/problem.hpp"

namespace jumpspec {

struct DexinSpec {
  double a = 0.5;
};

struct DeSpec {
  double b0 = -1.0;
  double b1 = 0.0;
};

struct OracleEigenvalue {
  cplx lambda;
  int multiplicity = 1;
};

ProblemSpec dexin_problem(const DexinSpec& spec);
ProblemSpec de_problem(const DeSpec& spec);

/// Recognizes b0 = -1, b1 = 0 and nu0 = nu1 = delta_a.
std::optional<DexinSpec> match_dexin(const ProblemSpec& spec);

/// Recognizes the de shape: constant coefficients and nu0 = nu1 = delta_{1/2}.
std::optional<DeSpec> match_de(const ProblemSpec& spec);

/// -(4/s) sin(s(1-a)/2) sin(sa/2) sin(s/2), s = sqrt(lambda), written as an
/// entire function of lambda.
cplx dexin_delta(const DexinSpec& spec, cplx lambda);

/// Zeros (2 k pi / c)^2 of the three sine factors, c in {1-a, a, 1}, up to
/// re_max, including 0. Coincident zeros (relative 1e-9) are merged; a zero
/// shared by all three factors has multiplicity 3.
std::vector<OracleEigenvalue> dexin_spectrum(const DexinSpec& spec, double re_max);

/// Delta of the de family in the variable u = -lambda/b0 - q, q = (b1 / 2 b0)^2:
/// -2 A^2 sin(sqrt(u)/2)/sqrt(u) ((A^2 + 1)/(2A) - cos(sqrt(u)/2)), A = exp(-b1 / 4 b0).
cplx de_delta_tilde(const DeSpec& spec, cplx u);

/// lambda_{n,1} = -4 b0 n^2 pi^2 - b1^2/(4 b0) for n = 1..n_max and
/// -16 b0 n^2 pi^2 -+ 4 b1 n pi i for n = 1..n_max, plus 0; all simple.
/// Throws PreconditionError for b1 = 0 (use dexin_spectrum with a = 1/2).
std::vector<OracleEigenvalue> de_spectrum(const DeSpec& spec, int n_max);

/// Smallest positive real part over the de spectrum:
/// -4 b0 pi^2 - b1^2/(4 b0) when |b1| <= -4 sqrt(3) b0 pi, else -16 b0 pi^2.
double de_gap(const DeSpec& spec);

}  // namespace jumpspec
