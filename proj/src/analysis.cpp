#include "qve/analysis.hpp"

#include <cmath>
#include <string>

#include "qve/solvers.hpp"
#include "qve/spectral.hpp"

namespace qve {

namespace {

constexpr double kProjectorTol = 1e-14;

Vector ones(const Problem& p) {
  return Vector::Ones(static_cast<Eigen::Index>(p.n()));
}

void require_nondegenerate(double value, double scale, const char* what) {
  if (!(std::abs(value) > kProjectorTol * scale)) {
    throw Error(ErrorCode::DegenerateProjector,
                std::string(what) + " = " + std::to_string(value));
  }
}

// (I - u s^T / s_dot_u) P (I - u v^T / v^T u) b(., u)
Matrix sandwich(const Problem& p, const Vector& u, const Vector& s,
                double s_dot_u, const Vector& v, const Matrix& pinv) {
  const auto n = static_cast<Eigen::Index>(p.n());
  const Matrix I = Matrix::Identity(n, n);
  const Matrix left_projector = I - (u * s.transpose()) / s_dot_u;
  const Matrix right_projector = I - (u * v.transpose()) / v.dot(u);
  return left_projector * pinv * right_projector * right_matrix(p, u);
}

// s^T = w^T (I - b(e - u, .) - b(., e - u))
Vector sigma1(const Problem& p, const Vector& u, const Vector& w) {
  const Vector d = ones(p) - u;
  return w - left_matrix(p, d).transpose() * w -
         right_matrix(p, d).transpose() * w;
}

}  // namespace

Vector perron_map(const Problem& p, const Vector& y, const Vector& w) {
  const Vector u = spectral::maximal_eigenvector(build_Hy(p, y)).right;
  return normalization_alpha(p, u, w) * u;
}

Matrix jacobian_F(const Problem& p, const Vector& y, const Vector& w) {
  const auto n = static_cast<Eigen::Index>(p.n());
  const Matrix H = build_Hy(p, y);
  const spectral::PerronPair pair = spectral::perron_pair(H);
  const Vector u = normalization_alpha(p, pair.right, w) * pair.right;

  const Vector s = sigma1(p, u, w);
  const double s_dot_u = s.dot(u);
  require_nondegenerate(s_dot_u, w.lpNorm<1>() * u.lpNorm<1>(), "sigma1^T u");
  require_nondegenerate(pair.left.dot(u), pair.left.lpNorm<1>() * u.lpNorm<1>(),
                        "v^T u");

  const Matrix pinv =
      spectral::pseudoinverse(H - pair.lambda * Matrix::Identity(n, n));
  return sandwich(p, u, s, s_dot_u, pair.left, pinv);
}

Matrix jacobian_at_solution(const Problem& p, const Vector& y_star,
                            const Vector& w) {
  const auto n = static_cast<Eigen::Index>(p.n());
  const Matrix H = build_Hy(p, y_star);
  const double defect = (H * y_star - y_star).lpNorm<1>();
  if (!(defect <= kSolutionTol)) {
    throw Error(ErrorCode::NotASolution,
                "||H_y y - y||_1 = " + std::to_string(defect));
  }

  const double wbyy = w.dot(apply_bilinear(p, y_star, y_star));
  require_nondegenerate(wbyy, w.lpNorm<1>() * y_star.squaredNorm(),
                        "w^T b(y*, y*)");
  const Vector v = spectral::perron_pair(H).left;
  require_nondegenerate(v.dot(y_star), v.lpNorm<1>() * y_star.lpNorm<1>(),
                        "v*^T y*");

  // A = b(e - y*, .) + b(., e) - I
  const Matrix A = H - Matrix::Identity(n, n);
  return sandwich(p, y_star, sigma1(p, y_star, w), wbyy, v,
                  spectral::pseudoinverse(A));
}

double limit_rate(const Problem& p_critical, const Vector& w,
                  double critical_tol) {
  const CriticalityReport report = criticality(p_critical, critical_tol);
  if (report.klass != Criticality::Critical) {
    throw Error(ErrorCode::NotCritical,
                "rho(R) = " + std::to_string(report.rhoR));
  }
  const spectral::PerronPair pair =
      spectral::perron_pair(mean_matrix(p_critical));
  const Vector& y = pair.right;
  const Vector& v = pair.left;
  const Vector byy = apply_bilinear(p_critical, y, y);
  const double wbyy = w.dot(byy);
  require_nondegenerate(wbyy, w.lpNorm<1>(), "w^T b(y, y)");
  return std::abs(1.0 - (v.dot(byy) / wbyy) * (w.dot(y) / v.dot(y)));
}

double estimate_linear_rate(std::span<const double> history) {
  constexpr std::size_t kMinPoints = 4;
  const std::size_t total = history.size();
  if (total < kMinPoints) {
    throw Error(ErrorCode::InsufficientHistory,
                std::to_string(total) + " entries, need at least 4");
  }
  const std::size_t count = std::max(kMinPoints, (total + 3) / 4);
  const std::size_t first = total - count;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = first; i < total; ++i) {
    const double r = history[i];
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw Error(ErrorCode::InsufficientHistory,
                  "non-positive residual in the fitted tail");
    }
    const double x = static_cast<double>(i - first);
    const double ly = std::log(r);
    sx += x;
    sy += ly;
    sxx += x * x;
    sxy += x * ly;
  }
  const double m = static_cast<double>(count);
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return std::exp(slope);
}

Matrix finite_difference_jacobian(const Problem& p, const Vector& y,
                                  const Vector& w, double h) {
  const auto n = static_cast<Eigen::Index>(p.n());
  Matrix J(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector plus = y;
    Vector minus = y;
    plus(i) += h;
    minus(i) -= h;
    J.col(i) = (perron_map(p, plus, w) - perron_map(p, minus, w)) / (2.0 * h);
  }
  return J;
}

}  // namespace qve
