#pragma once

// Local convergence analysis of the Perron iteration y -> F(y), where F(y)
// is the Perron vector of H_y scaled by normalization_alpha.

#include <optional>
#include <span>

#include "qve/core.hpp"

namespace qve {

struct RateReport {
  double spectralRadius = 0.0;  // rho(JF at y*)
  double predictedRate = 0.0;
  std::optional<double> empiricalRate;
  std::optional<double> limitRate;
};

inline constexpr double kDefaultFiniteDifferenceStep = 1e-6;
inline constexpr double kSolutionTol = 1e-10;

/// F(y): the maximal eigenvector of H_y, scaled so the optimistic residual
/// is orthogonal to w.
Vector perron_map(const Problem& p, const Vector& y, const Vector& w);

/// Analytic Jacobian of F at y:
///   (I - u s^T / s^T u) (H_y - lambda I)^+ (I - u v^T / v^T u) b(., u)
/// with u = F(y), v the left Perron vector of H_y and
/// s^T = w^T (I - b(e - u, .) - b(., e - u)).
Matrix jacobian_F(const Problem& p, const Vector& y, const Vector& w);

/// The same Jacobian specialised to a solution y* of the optimistic
/// equation, where lambda = 1 and s^T y* = w^T b(y*, y*).
Matrix jacobian_at_solution(const Problem& p, const Vector& y_star,
                            const Vector& w);

/// Limit of rho(JF) along a family approaching the critical problem
/// `p_critical`: |1 - (v^T b(y,y) / w^T b(y,y)) (w^T y / v^T y)| with y, v
/// the right/left Perron vectors of R.
double limit_rate(const Problem& p_critical, const Vector& w,
                  double critical_tol = 1e-8);

/// Per-iteration contraction factor: exp of the least-squares slope of
/// log(history) over the last quarter of the entries (at least 4).
double estimate_linear_rate(std::span<const double> history);

/// Central-difference approximation of the Jacobian of perron_map.
Matrix finite_difference_jacobian(const Problem& p, const Vector& y,
                                  const Vector& w,
                                  double h = kDefaultFiniteDifferenceStep);

}  // namespace qve
