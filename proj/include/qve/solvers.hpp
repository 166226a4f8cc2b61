#pragma once

// Root-finders for x = a + b(x, x): the classical monotone functional
// iterations, Newton's method, and the Perron iteration which works on the
// survival vector y = e - x instead.

#include <string>
#include <string_view>
#include <vector>

#include "qve/core.hpp"

namespace qve {

enum class SolverStatus { Converged, MaxIterations, Diverged, ComplexDominant };

const char* to_string(SolverStatus s) noexcept;

enum class FunctionalVariant { Natural, Depth, Order, Thicknesses };

/// Which vector fixes the Perron-vector normalization w^T(residual) = 0.
enum class WeightChoice { LeftPerron, RightPerron, Ones };

const char* to_string(WeightChoice w) noexcept;
WeightChoice parse_weight_choice(std::string_view text);

inline constexpr double kDefaultEpsilon = 1e-13;

struct SolverConfig {
  double epsilon = kDefaultEpsilon;  // per component; stop at n * epsilon
  long maxIterations = 0;            // 0 selects the per-solver default
  WeightChoice weight = WeightChoice::LeftPerron;
  bool recordIterates = false;       // keep every x_k in SolverResult::iterates
};

inline constexpr long kFunctionalMaxIterations = 1'000'000;
inline constexpr long kNewtonMaxIterations = 200;
inline constexpr long kPerronMaxIterations = 200;

struct SolverResult {
  Vector x;  // extinction probability
  Vector y;  // survival probability e - x
  SolverStatus status = SolverStatus::MaxIterations;
  long iterations = 0;
  std::vector<double> residualHistory;  // iterations + 1 entries
  std::vector<Vector> iterates;         // x_0..x_k when recordIterates is set
  double elapsed = 0.0;                 // wall-clock seconds
  std::string message;

  bool converged() const noexcept { return status == SolverStatus::Converged; }
};

SolverResult solve_functional(const Problem& p, FunctionalVariant variant,
                              const SolverConfig& cfg = {});

SolverResult solve_newton(const Problem& p, const SolverConfig& cfg = {});

/// alpha with w^T(alpha u - b(alpha u, e) - b(e, alpha u) + b(alpha u, alpha u))
/// = 0 and alpha != 0 unless the linear term vanishes.
double normalization_alpha(const Problem& p, const Vector& u, const Vector& w);

/// The normalization vector selected by `choice`: left or right Perron
/// vector of R = b(e, .) + b(., e), or the all-ones vector.
Vector weight_vector(const Problem& p, WeightChoice choice);

SolverResult solve_perron(const Problem& p, const SolverConfig& cfg = {});

/// Perron iteration with an explicit normalization vector.
SolverResult solve_perron(const Problem& p, const Vector& w,
                          const SolverConfig& cfg);

/// Solver ids used by the CLI: natural, depth, order, thicknesses, newton,
/// perron.
SolverResult solve_by_id(const Problem& p, std::string_view id,
                         const SolverConfig& cfg = {});

const std::vector<std::string>& solver_ids();

}  // namespace qve
