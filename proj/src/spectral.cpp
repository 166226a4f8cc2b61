#include "qve/spectral.hpp"

#include <cmath>
#include <string>

namespace qve::spectral {

namespace {

double inf_norm(const Matrix& M) {
  return M.rows() == 0 ? 0.0 : M.cwiseAbs().rowwise().sum().maxCoeff();
}

// Index of the eigenvalue with maximal real part under the fixed
// lexicographic tie-break (real part, then modulus, then smaller |imag|).
Eigen::Index select_maximal(const Eigen::VectorXcd& values, double tie_tol) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    const auto& cand = values(i);
    const auto& cur = values(best);
    const double dre = cand.real() - cur.real();
    if (dre > tie_tol) {
      best = i;
      continue;
    }
    if (dre < -tie_tol) continue;
    const double dmod = std::abs(cand) - std::abs(cur);
    if (dmod > tie_tol) {
      best = i;
      continue;
    }
    if (dmod < -tie_tol) continue;
    if (std::abs(cand.imag()) < std::abs(cur.imag())) best = i;
  }
  return best;
}

// Real eigenvector for a (numerically) real eigenvalue, oriented to a
// nonnegative sum and scaled to unit 1-norm.
Vector orient(const Eigen::VectorXcd& column) {
  Vector v = column.real();
  // A complex scaling can put the vector on the imaginary axis.
  if (v.lpNorm<1>() < column.imag().lpNorm<1>()) v = column.imag();
  double sum = v.sum();
  if (std::abs(sum) <= 1e-8 * v.lpNorm<1>()) {
    Eigen::Index idx = 0;
    v.cwiseAbs().maxCoeff(&idx);
    sum = v(idx);
  }
  if (sum < 0.0) v = -v;
  const double norm = v.lpNorm<1>();
  if (norm > 0.0) v /= norm;
  return v;
}

struct Selected {
  std::complex<double> lambda;
  Vector vector;
};

Selected select_real_maximal(const Matrix& M, double eig_tol) {
  const double scale = std::max(1.0, inf_norm(M));
  Eigen::EigenSolver<Matrix> solver(M, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "eigendecomposition failed");
  }
  const Eigen::VectorXcd values = solver.eigenvalues();
  const Eigen::Index idx = select_maximal(values, eig_tol * scale);
  const std::complex<double> lambda = values(idx);
  if (std::abs(lambda.imag()) > eig_tol * scale) {
    throw Error(ErrorCode::ComplexDominant,
                "maximal eigenvalue " + std::to_string(lambda.real()) + " + " +
                    std::to_string(lambda.imag()) + "i is not real");
  }
  return {std::complex<double>(lambda.real(), 0.0),
          orient(solver.eigenvectors().col(idx))};
}

void require_square(const Matrix& M) {
  if (M.rows() != M.cols() || M.rows() == 0) {
    throw Error(ErrorCode::ShapeMismatch, "expected a nonempty square matrix");
  }
}

void require_perron_input(const Matrix& M) {
  require_square(M);
  if ((M.array() < 0.0).any()) {
    throw Error(ErrorCode::NotNonnegative, "matrix has negative entries");
  }
  if (!is_irreducible(M) || (M.rows() == 1 && M(0, 0) == 0.0)) {
    throw Error(ErrorCode::Reducible, "matrix is reducible");
  }
}

}  // namespace

SpectralPair maximal_eigenvector(const Matrix& M, double eig_tol) {
  require_square(M);
  Selected right = select_real_maximal(M, eig_tol);
  Selected left = select_real_maximal(M.transpose(), eig_tol);
  return {right.lambda, std::move(right.vector), std::move(left.vector)};
}

PerronPair perron_pair(const Matrix& M, double eig_tol) {
  require_perron_input(M);
  if (M.rows() > kPowerMethodThreshold) return perron_pair_power(M, eig_tol);

  SpectralPair pair = maximal_eigenvector(M, eig_tol);
  return {pair.lambda.real(), std::move(pair.right), std::move(pair.left)};
}

PerronPair perron_pair_power(const Matrix& M, double eig_tol,
                             int max_iterations) {
  require_perron_input(M);
  const Eigen::Index n = M.rows();
  const Matrix shifted = M + Matrix::Identity(n, n);
  const double tol = eig_tol * inf_norm(shifted);

  auto iterate = [&](const Matrix& A) {
    Vector x = Vector::Constant(n, 1.0 / static_cast<double>(n));
    for (int k = 0; k < max_iterations; ++k) {
      Vector next = A * x;
      const double mu = next.sum();  // ||A x||_1 since everything is >= 0
      next /= mu;
      if ((A * next - mu * next).lpNorm<Eigen::Infinity>() <= tol) {
        return std::pair{mu, next};
      }
      x = std::move(next);
    }
    throw Error(ErrorCode::NoConvergence,
                "power method exhausted " + std::to_string(max_iterations) +
                    " iterations");
  };

  auto [mu, right] = iterate(shifted);
  auto [mu_left, left] = iterate(shifted.transpose());
  (void)mu_left;
  return {mu - 1.0, std::move(right), std::move(left)};
}

Matrix pseudoinverse(const Matrix& M, double rank_tol) {
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  Matrix result = Matrix::Zero(M.cols(), M.rows());
  if (sigma.size() == 0 || sigma(0) == 0.0) return result;
  const double cutoff = rank_tol * sigma(0);
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) <= cutoff) break;  // singular values are sorted descending
    result.noalias() += (svd.matrixV().col(i) / sigma(i)) *
                        svd.matrixU().col(i).transpose();
  }
  return result;
}

double spectral_radius(const Matrix& M) {
  require_square(M);
  Eigen::EigenSolver<Matrix> solver(M, /*computeEigenvectors=*/false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace qve::spectral
