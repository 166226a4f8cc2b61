#pragma once

// Dense eigen-computations for small matrices: Perron pairs, maximal
// eigenvectors and the Moore-Penrose pseudoinverse.

#include <complex>

#include "qve/core.hpp"

namespace qve::spectral {

inline constexpr double kDefaultEigTol = 1e-12;
inline constexpr double kDefaultRankTol = 1e-12;
/// Above this order perron_pair switches from a full decomposition to a
/// shifted power method.
inline constexpr Eigen::Index kPowerMethodThreshold = 64;

struct SpectralPair {
  std::complex<double> lambda;
  Vector right;
  Vector left;

  double real() const noexcept { return lambda.real(); }
};

struct PerronPair {
  double lambda = 0.0;
  Vector right;  // strictly positive, ||right||_1 = 1
  Vector left;   // strictly positive, ||left||_1 = 1
};

/// Spectral radius together with the positive right/left eigenvectors of a
/// nonnegative irreducible matrix.
PerronPair perron_pair(const Matrix& M, double eig_tol = kDefaultEigTol);

/// Power method on M + I (primitive whenever M is irreducible). Exposed for
/// testing; perron_pair dispatches here above kPowerMethodThreshold.
PerronPair perron_pair_power(const Matrix& M, double eig_tol = kDefaultEigTol,
                             int max_iterations = 100000);

/// Eigenpair for the eigenvalue of maximal real part. Ties on the real part
/// go to the larger modulus, then to the smaller |imag|. Throws
/// ComplexDominant when the selected eigenvalue is not real within eig_tol.
/// The right vector is normalized to ||.||_1 = 1 with a nonnegative sum.
SpectralPair maximal_eigenvector(const Matrix& M,
                                 double eig_tol = kDefaultEigTol);

/// X^dagger via SVD; singular values at or below rank_tol * sigma_max are
/// treated as zero.
Matrix pseudoinverse(const Matrix& M, double rank_tol = kDefaultRankTol);

/// max |lambda_i(M)|.
double spectral_radius(const Matrix& M);

}  // namespace qve::spectral
