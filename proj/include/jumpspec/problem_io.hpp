#pragma once

// Problem-description documents (JSON syntax, "version": 1).
//
//   {"version": 1,
//    "b0": {"type": "constant", "value": -1.0},
//    "b1": {"type": "piecewise", "breakpoints": [0, 0.5, 1], "polys": [[c0, c1, c2, c3], ...]},
//    "nu0": {"atoms": [{"x": 0.5, "w": 1.0}]},
//    "nu1": {"atoms": [], "density": {"breakpoints": [0, 1], "values": [1.0]}}}
//
// Structural problems (not JSON, wrong value types, missing required members)
// raise ParseError. Unknown keys and an unsupported version are reported as
// violations alongside the parsed data so that `validate` can list them.

#include <filesystem>
#include <string>
#include <vector>

#include "jumpspec/problem.hpp"

namespace jumpspec {

class ParseError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kProblemFormatVersion = 1;

struct ParsedProblem {
  ProblemSpec spec;
  std::vector<Violation> schema_violations;
};

ParsedProblem parse_problem(const std::string& text);
ParsedProblem load_problem_file(const std::filesystem::path& path);

/// Schema violations followed by the invariant checks of `validate`.
ValidationReport validate_document(const ParsedProblem& parsed, double b0_floor = kDefaultB0Floor);

std::string problem_to_json(const ProblemSpec& spec);

}  // namespace jumpspec
