#include "qve/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qve::io {

namespace {

using nlohmann::json;

double number_at(const json& node, const char* where) {
  if (!node.is_number()) {
    throw Error(ErrorCode::ParseError, std::string(where) + " is not a number");
  }
  return node.get<double>();
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

Problem parse_problem(std::string_view json_text, double tol) {
  const json doc = parse_json(json_text);
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("a") ||
      !doc.contains("B")) {
    throw Error(ErrorCode::ParseError, "expected an object with n, a and B");
  }
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
    throw Error(ErrorCode::ParseError, "n must be a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(doc["n"].get<long long>());
  if (static_cast<std::size_t>(n) > kMaxDimension) {
    throw Error(ErrorCode::ParseError, "n exceeds " + std::to_string(kMaxDimension));
  }

  const json& a_node = doc["a"];
  const json& b_node = doc["B"];
  if (!a_node.is_array() || static_cast<Eigen::Index>(a_node.size()) != n) {
    throw Error(ErrorCode::ShapeMismatch, "a must be an array of n numbers");
  }
  if (!b_node.is_array() || static_cast<Eigen::Index>(b_node.size()) != n) {
    throw Error(ErrorCode::ShapeMismatch, "B must be an array of n rows");
  }

  Vector a(n);
  for (Eigen::Index i = 0; i < n; ++i) a(i) = number_at(a_node[i], "a[i]");
  Matrix B(n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = b_node[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n * n) {
      throw Error(ErrorCode::ShapeMismatch, "each row of B needs n^2 entries");
    }
    for (Eigen::Index c = 0; c < n * n; ++c) B(i, c) = number_at(row[c], "B[i][c]");
  }
  return validate_problem(a, B, tol);
}

Problem load_problem(const std::string& path, double tol) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_problem(buffer.str(), tol);
}

std::string problem_to_json(const Problem& p) {
  const auto n = static_cast<Eigen::Index>(p.n());
  std::string out = "{\n  \"n\": " + std::to_string(n) + ",\n  \"a\": [";
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i) out += ", ";
    out += format_double(p.a()(i));
  }
  out += "],\n  \"B\": [";
  for (Eigen::Index i = 0; i < n; ++i) {
    out += i ? ",\n    [" : "\n    [";
    for (Eigen::Index c = 0; c < n * n; ++c) {
      if (c) out += ", ";
      out += format_double(p.B()(i, c));
    }
    out += "]";
  }
  out += "\n  ]\n}\n";
  return out;
}

void save_problem(const Problem& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << problem_to_json(p);
}

GeneratorSpec parse_generator_spec(std::string_view json_text) {
  const json doc = parse_json(json_text);
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("seed") ||
      !doc.contains("param")) {
    throw Error(ErrorCode::ParseError, "expected an object with n, seed, param");
  }
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 1 ||
      !doc["seed"].is_number_unsigned()) {
    throw Error(ErrorCode::ParseError, "n and seed must be nonnegative integers");
  }
  GeneratorSpec spec;
  spec.n = static_cast<std::size_t>(doc["n"].get<long long>());
  if (spec.n > kMaxDimension) {
    throw Error(ErrorCode::ParseError, "n exceeds " + std::to_string(kMaxDimension));
  }
  spec.seed = doc["seed"].get<std::uint64_t>();
  spec.param = number_at(doc["param"], "param");
  return spec;
}

std::string generator_spec_to_json(const GeneratorSpec& spec) {
  return "{\"n\": " + std::to_string(spec.n) +
         ", \"seed\": " + std::to_string(spec.seed) +
         ", \"param\": " + format_double(spec.param) + "}";
}

}  // namespace qve::io
