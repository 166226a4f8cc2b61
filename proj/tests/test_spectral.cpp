#include "qve/spectral.hpp"

#include <gtest/gtest.h>

#include <random>

namespace qve::spectral {
namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix M(2, 2);
  M << a, b, c, d;
  return M;
}

double inf_norm(const Matrix& M) { return M.cwiseAbs().rowwise().sum().maxCoeff(); }

Matrix random_nonnegative(Eigen::Index n, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  Matrix M(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = dist(rng);
  return M;
}

void expect_pair_contract(const Matrix& M, const PerronPair& pair, double eig_tol) {
  const double scale = eig_tol * inf_norm(M);
  EXPECT_LE((M * pair.right - pair.lambda * pair.right).lpNorm<Eigen::Infinity>(), scale);
  EXPECT_LE((pair.left.transpose() * M - pair.lambda * pair.left.transpose())
                .lpNorm<Eigen::Infinity>(),
            scale);
  EXPECT_GT(pair.right.minCoeff(), 0.0);
  EXPECT_GT(pair.left.minCoeff(), 0.0);
  EXPECT_NEAR(pair.right.sum(), 1.0, 1e-14);
  EXPECT_NEAR(pair.left.sum(), 1.0, 1e-14);
}

TEST(PerronPair, Examples) {
  PerronPair p = perron_pair(mat2(2, 1, 1, 2));
  EXPECT_NEAR(p.lambda, 3.0, 1e-14);
  EXPECT_NEAR(p.right(0), 0.5, 1e-15);
  EXPECT_NEAR(p.right(1), 0.5, 1e-15);

  p = perron_pair(mat2(0, 1, 1, 0));
  EXPECT_NEAR(p.lambda, 1.0, 1e-14);
  EXPECT_NEAR(p.right(0), 0.5, 1e-15);

  p = perron_pair(Matrix::Constant(1, 1, 1.5));
  EXPECT_DOUBLE_EQ(p.lambda, 1.5);
  EXPECT_DOUBLE_EQ(p.right(0), 1.0);
}

TEST(PerronPair, Errors) {
  try {
    perron_pair(mat2(1, -1, 1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNonnegative);
  }
  try {
    perron_pair(mat2(1, 1, 0, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Reducible);
  }
}

TEST(PerronPair, ResidualContractOnRandomMatrices) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix M = random_nonnegative(1 + trial % 12, rng);
    expect_pair_contract(M, perron_pair(M), kDefaultEigTol);
  }
}

TEST(PerronPair, PowerPathAgreesWithDensePath) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix M = random_nonnegative(3 + trial, rng);
    const PerronPair dense = perron_pair(M);
    const PerronPair power = perron_pair_power(M);
    EXPECT_NEAR(dense.lambda, power.lambda, 1e-11 * dense.lambda);
    EXPECT_LE((dense.right - power.right).lpNorm<Eigen::Infinity>(), 1e-10);
    EXPECT_LE((dense.left - power.left).lpNorm<Eigen::Infinity>(), 1e-10);
  }
  // Periodic matrix: plain power iteration would oscillate; the shift fixes it.
  const PerronPair cyc = perron_pair_power(mat2(0, 1, 1, 0));
  EXPECT_NEAR(cyc.lambda, 1.0, 1e-12);
}

TEST(PerronPair, LargeMatrixUsesPowerMethod) {
  std::mt19937 rng(23);
  const Matrix M = random_nonnegative(kPowerMethodThreshold + 6, rng);
  expect_pair_contract(M, perron_pair(M), kDefaultEigTol);
}

TEST(MaximalEigenvector, Examples) {
  SpectralPair p = maximal_eigenvector(mat2(3, 0, 0, 1));
  EXPECT_DOUBLE_EQ(p.real(), 3.0);
  EXPECT_NEAR(p.right(0), 1.0, 1e-15);
  EXPECT_NEAR(p.right(1), 0.0, 1e-15);

  // Upper triangular: eigenvalues on the diagonal, maximal real part 1.
  p = maximal_eigenvector(mat2(1, -2, 0, 0.5));
  EXPECT_NEAR(p.real(), 1.0, 1e-15);
  EXPECT_NEAR(p.right(0), 1.0, 1e-15);
  EXPECT_NEAR(p.right(1), 0.0, 1e-15);
}

TEST(MaximalEigenvector, AgreesWithPerronPairOnNonnegativeInput) {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix M = random_nonnegative(2 + trial % 8, rng);
    const SpectralPair s = maximal_eigenvector(M);
    const PerronPair p = perron_pair(M);
    EXPECT_NEAR(s.real(), p.lambda, kDefaultEigTol * inf_norm(M));
    EXPECT_LE((s.right - p.right).lpNorm<Eigen::Infinity>(), 1e-12);
  }
}

TEST(MaximalEigenvector, TieBreakPrefersLargerModulus) {
  // Eigenvalues 1 and 1 +- 2i share the real part; the complex pair has the
  // larger modulus, so the selection must surface ComplexDominant.
  Matrix M = Matrix::Zero(3, 3);
  M(0, 0) = 1.0;
  M.block(1, 1, 2, 2) = mat2(1, -2, 2, 1);
  try {
    maximal_eigenvector(M);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ComplexDominant);
  }
  // Eigenvalues 2 and -2 share the modulus; maximal real part wins.
  const SpectralPair p = maximal_eigenvector(mat2(0, 2, 2, 0));
  EXPECT_NEAR(p.real(), 2.0, 1e-14);
}

TEST(MaximalEigenvector, ComplexDominantIsSurfaced) {
  try {
    maximal_eigenvector(mat2(0, -1, 1, 0));  // eigenvalues +-i
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ComplexDominant);
  }
}

TEST(Pseudoinverse, Examples) {
  const Matrix d = pseudoinverse(mat2(2, 0, 0, 0));
  EXPECT_TRUE(d.isApprox(mat2(0.5, 0, 0, 0)));
  // Rank one: [[1,1],[1,1]] = 2 q q^T with q = e/sqrt(2); inverse is q q^T / 2.
  const Matrix ones = pseudoinverse(Matrix::Constant(2, 2, 1.0));
  EXPECT_LE((ones - Matrix::Constant(2, 2, 0.25)).lpNorm<Eigen::Infinity>(), 1e-15);
  EXPECT_TRUE(pseudoinverse(Matrix::Zero(3, 3)).isZero(0.0));
}

TEST(Pseudoinverse, InvertibleMatchesInverse) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix M = random_nonnegative(4, rng) + 4.0 * Matrix::Identity(4, 4);
    EXPECT_LE((pseudoinverse(M) - M.inverse()).lpNorm<Eigen::Infinity>(), 1e-10);
  }
}

TEST(Pseudoinverse, PenroseIdentitiesIncludingRankDeficient) {
  std::mt19937 rng(37);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + trial % 6;
    const Eigen::Index rank = 1 + trial % n;
    Matrix L(n, rank), R(rank, n);
    for (Eigen::Index i = 0; i < L.size(); ++i) L.data()[i] = g(rng);
    for (Eigen::Index i = 0; i < R.size(); ++i) R.data()[i] = g(rng);
    const Matrix X = L * R;
    const Matrix P = pseudoinverse(X);
    EXPECT_LE((X * P * X - X).lpNorm<Eigen::Infinity>(), 1e-10);
    EXPECT_LE((P * X * P - P).lpNorm<Eigen::Infinity>(), 1e-10);
    EXPECT_LE(((X * P).transpose() - X * P).lpNorm<Eigen::Infinity>(), 1e-10);
    EXPECT_LE(((P * X).transpose() - P * X).lpNorm<Eigen::Infinity>(), 1e-10);
  }
}

TEST(SpectralRadius, Basic) {
  EXPECT_NEAR(spectral_radius(mat2(0, -1, 1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(spectral_radius(mat2(-3, 0, 0, 2)), 3.0, 1e-15);
}

}  // namespace
}  // namespace qve::spectral
