#pragma once

// Problem files: {"n": int, "a": [n numbers], "B": [n rows of n^2 numbers]},
// columns of B in the (j * n + k) Kronecker order. Numbers are written with
// 17 significant digits so a round trip is exact.

#include <cstdint>
#include <string>
#include <string_view>

#include "qve/core.hpp"

namespace qve::io {

/// Largest n accepted from files and generator specs (B holds n^3 doubles).
inline constexpr std::size_t kMaxDimension = 128;

Problem parse_problem(std::string_view json_text,
                      double tol = kDefaultValidationTol);
Problem load_problem(const std::string& path,
                     double tol = kDefaultValidationTol);

std::string problem_to_json(const Problem& p);
void save_problem(const Problem& p, const std::string& path);

/// Generator specs serialize as {"n": int, "seed": uint64, "param": number}.
struct GeneratorSpec {
  std::size_t n = 2;
  std::uint64_t seed = 0;
  double param = 0.0;
};

GeneratorSpec parse_generator_spec(std::string_view json_text);
std::string generator_spec_to_json(const GeneratorSpec& spec);

/// printf("%.17g") for one double.
std::string format_double(double value);

}  // namespace qve::io
