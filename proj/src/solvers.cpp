#include "qve/solvers.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "qve/spectral.hpp"

namespace qve {

const char* to_string(SolverStatus s) noexcept {
  switch (s) {
    case SolverStatus::Converged: return "Converged";
    case SolverStatus::MaxIterations: return "MaxIterations";
    case SolverStatus::Diverged: return "Diverged";
    case SolverStatus::ComplexDominant: return "ComplexDominant";
  }
  return "Unknown";
}

const char* to_string(WeightChoice w) noexcept {
  switch (w) {
    case WeightChoice::LeftPerron: return "left-perron";
    case WeightChoice::RightPerron: return "right-perron";
    case WeightChoice::Ones: return "ones";
  }
  return "unknown";
}

WeightChoice parse_weight_choice(std::string_view text) {
  if (text == "left-perron") return WeightChoice::LeftPerron;
  if (text == "right-perron") return WeightChoice::RightPerron;
  if (text == "ones") return WeightChoice::Ones;
  throw Error(ErrorCode::ParseError,
              "unknown w-choice '" + std::string(text) + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kMinRcond = 1e-14;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

long resolve_max_iterations(const SolverConfig& cfg, long fallback) {
  if (!(cfg.epsilon > 0.0)) {
    throw Error(ErrorCode::OutOfRange, "epsilon must be positive");
  }
  if (cfg.maxIterations < 0) {
    throw Error(ErrorCode::OutOfRange, "maxIterations must be >= 1");
  }
  return cfg.maxIterations == 0 ? fallback : cfg.maxIterations;
}

Vector solve_linear(const Matrix& A, const Vector& rhs, ErrorCode failure) {
  Eigen::PartialPivLU<Matrix> lu(A);
  const double rcond = lu.rcond();
  if (!(rcond >= kMinRcond)) {
    throw Error(failure, "reciprocal condition estimate " +
                             std::to_string(rcond));
  }
  return lu.solve(rhs);
}

// Shared driver for the x-space iterations: x_0 = 0, stop when the residual
// 1-norm drops to n * epsilon.
template <typename Step>
SolverResult iterate_from_zero(const Problem& p, const SolverConfig& cfg,
                               long max_iterations, Step&& step) {
  const auto start = Clock::now();
  const auto n = static_cast<Eigen::Index>(p.n());
  const double threshold = static_cast<double>(n) * cfg.epsilon;

  SolverResult result;
  Vector x = Vector::Zero(n);
  ResidualReport r = residual(p, x);
  result.residualHistory.push_back(r.norm1);
  if (cfg.recordIterates) result.iterates.push_back(x);

  result.status = SolverStatus::MaxIterations;
  while (true) {
    if (r.norm1 <= threshold) {
      result.status = SolverStatus::Converged;
      break;
    }
    if (result.iterations >= max_iterations) break;
    x = step(x, r, result.iterations);
    ++result.iterations;
    r = residual(p, x);
    result.residualHistory.push_back(r.norm1);
    if (cfg.recordIterates) result.iterates.push_back(x);
    if (!std::isfinite(r.norm1)) {
      result.status = SolverStatus::Diverged;
      result.message = "non-finite iterate";
      break;
    }
  }

  result.y = Vector::Ones(n) - x;
  result.x = std::move(x);
  result.elapsed = seconds_since(start);
  return result;
}

}  // namespace

SolverResult solve_functional(const Problem& p, FunctionalVariant variant,
                              const SolverConfig& cfg) {
  const long max_it = resolve_max_iterations(cfg, kFunctionalMaxIterations);
  const auto n = static_cast<Eigen::Index>(p.n());
  const Matrix I = Matrix::Identity(n, n);

  auto depth = [&](const Vector& x) {
    // x' = a + b(x, x')
    return solve_linear(I - left_matrix(p, x), p.a(),
                        ErrorCode::SingularLinearSolve);
  };
  auto order = [&](const Vector& x) {
    // x' = a + b(x', x)
    return solve_linear(I - right_matrix(p, x), p.a(),
                        ErrorCode::SingularLinearSolve);
  };

  return iterate_from_zero(
      p, cfg, max_it,
      [&](const Vector& x, const ResidualReport& r, long k) -> Vector {
        switch (variant) {
          case FunctionalVariant::Natural:
            return x - r.vector;  // a + b(x, x)
          case FunctionalVariant::Depth:
            return depth(x);
          case FunctionalVariant::Order:
            return order(x);
          case FunctionalVariant::Thicknesses:
            return k % 2 == 0 ? depth(x) : order(x);
        }
        return x;
      });
}

SolverResult solve_newton(const Problem& p, const SolverConfig& cfg) {
  const long max_it = resolve_max_iterations(cfg, kNewtonMaxIterations);
  const auto n = static_cast<Eigen::Index>(p.n());
  const Matrix I = Matrix::Identity(n, n);
  return iterate_from_zero(
      p, cfg, max_it,
      [&](const Vector& x, const ResidualReport& r, long) -> Vector {
        const Matrix J = I - left_matrix(p, x) - right_matrix(p, x);
        return x + solve_linear(J, -r.vector, ErrorCode::SingularJacobian);
      });
}

double normalization_alpha(const Problem& p, const Vector& u, const Vector& w) {
  if (static_cast<std::size_t>(w.size()) != p.n()) {
    throw Error(ErrorCode::ShapeMismatch, "w has the wrong length");
  }
  const Vector e = Vector::Ones(static_cast<Eigen::Index>(p.n()));
  const double denominator = w.dot(apply_bilinear(p, u, u));
  const double guard =
      1e-14 * w.lpNorm<1>() * u.lpNorm<1>() * u.lpNorm<1>();
  if (!(std::abs(denominator) >= guard) || denominator == 0.0) {
    throw Error(ErrorCode::DegenerateNormalization,
                "|w^T b(u,u)| = " + std::to_string(std::abs(denominator)));
  }
  const double linear =
      w.dot(u - apply_bilinear(p, u, e) - apply_bilinear(p, e, u));
  return -linear / denominator;
}

Vector weight_vector(const Problem& p, WeightChoice choice) {
  switch (choice) {
    case WeightChoice::LeftPerron:
      return spectral::perron_pair(mean_matrix(p)).left;
    case WeightChoice::RightPerron:
      return spectral::perron_pair(mean_matrix(p)).right;
    case WeightChoice::Ones:
      return Vector::Ones(static_cast<Eigen::Index>(p.n()));
  }
  return Vector::Ones(static_cast<Eigen::Index>(p.n()));
}

SolverResult solve_perron(const Problem& p, const SolverConfig& cfg) {
  return solve_perron(p, weight_vector(p, cfg.weight), cfg);
}

SolverResult solve_perron(const Problem& p, const Vector& w,
                          const SolverConfig& cfg) {
  const long max_it = resolve_max_iterations(cfg, kPerronMaxIterations);
  const auto start = Clock::now();
  const auto n = static_cast<Eigen::Index>(p.n());
  const double threshold = static_cast<double>(n) * cfg.epsilon;
  const Vector e = Vector::Ones(n);

  SolverResult result;
  Vector y = Vector::Zero(n);
  Matrix H = build_Hy(p, y);
  result.residualHistory.push_back((H * y - y).lpNorm<1>());
  if (cfg.recordIterates) result.iterates.push_back(e - y);

  // At least one step is taken: y_0 = 0 satisfies the loop guard trivially.
  result.status = SolverStatus::MaxIterations;
  while (result.iterations < max_it) {
    Vector u;
    try {
      u = spectral::maximal_eigenvector(H).right;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::ComplexDominant) throw;
      result.status = SolverStatus::ComplexDominant;
      result.message = err.what();
      break;
    }
    y = normalization_alpha(p, u, w) * u;
    ++result.iterations;

    H = build_Hy(p, y);
    const double guard = (H * y - y).lpNorm<1>();
    result.residualHistory.push_back(guard);
    if (cfg.recordIterates) result.iterates.push_back(e - y);
    if (!std::isfinite(guard)) {
      result.status = SolverStatus::Diverged;
      result.message = "non-finite iterate";
      break;
    }
    if (guard < threshold && residual(p, e - y).norm1 <= 10.0 * threshold) {
      result.status = SolverStatus::Converged;
      break;
    }
  }

  result.x = e - y;
  result.y = std::move(y);
  result.elapsed = seconds_since(start);
  return result;
}

const std::vector<std::string>& solver_ids() {
  static const std::vector<std::string> ids{
      "natural", "depth", "order", "thicknesses", "newton", "perron"};
  return ids;
}

SolverResult solve_by_id(const Problem& p, std::string_view id,
                         const SolverConfig& cfg) {
  if (id == "natural") return solve_functional(p, FunctionalVariant::Natural, cfg);
  if (id == "depth") return solve_functional(p, FunctionalVariant::Depth, cfg);
  if (id == "order") return solve_functional(p, FunctionalVariant::Order, cfg);
  if (id == "thicknesses") {
    return solve_functional(p, FunctionalVariant::Thicknesses, cfg);
  }
  if (id == "newton") return solve_newton(p, cfg);
  if (id == "perron") return solve_perron(p, cfg);
  throw Error(ErrorCode::ParseError, "unknown solver '" + std::string(id) + "'");
}

}  // namespace qve
