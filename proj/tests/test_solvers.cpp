#include "qve/solvers.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qve/problems.hpp"

namespace qve {
namespace {

constexpr double kEps = kDefaultEpsilon;

// Minimal root of beta x^2 - x + (1 - beta) = 0.
double scalar_root(double beta) {
  return (1.0 - std::sqrt(1.0 - 4.0 * beta * (1.0 - beta))) / (2.0 * beta);
}

Problem uniform_two() {
  return validate_problem(Vector::Constant(2, 0.5), Matrix::Constant(2, 4, 0.125));
}

// Targets past the family maximum are pulled back just under it.
Problem family_at(std::size_t n, std::uint64_t seed, double rho) {
  const FamilySpec spec{n, seed};
  return gen_family(spec, find_param_for_rho(spec, std::min(rho, 0.98 * family_max_rho(spec))));
}

const FunctionalVariant kVariants[] = {FunctionalVariant::Natural, FunctionalVariant::Depth,
                                       FunctionalVariant::Order,
                                       FunctionalVariant::Thicknesses};

TEST(SolveFunctional, ScalarNaturalReachesMinimalRoot) {
  const SolverResult r = solve_functional(gen_scalar(0.75), FunctionalVariant::Natural);
  ASSERT_TRUE(r.converged());
  EXPECT_NEAR(r.x(0), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.x(0), scalar_root(0.75), 1e-12);
  EXPECT_NEAR(r.y(0), 2.0 / 3.0, 1e-12);
  EXPECT_EQ(r.residualHistory.size(), static_cast<std::size_t>(r.iterations) + 1);
}

TEST(SolveFunctional, LinearProblemTakesOneIteration) {
  const Problem p = validate_problem(Vector::Ones(3), Matrix::Zero(3, 9));
  for (auto v : kVariants) {
    const SolverResult r = solve_functional(p, v);
    ASSERT_TRUE(r.converged());
    EXPECT_EQ(r.iterations, 1);
    EXPECT_TRUE(r.x.isApprox(Vector::Ones(3)));
  }
}

TEST(SolveFunctional, CriticalSymmetricProblemCreepsToOne) {
  // Reduces to c = 0.5 + 0.5 c^2 with a double root at 1; the error decays
  // like 1/k, so the default budget is too small.
  SolverConfig cfg;
  cfg.maxIterations = 10'000'000;
  for (auto v : kVariants) {
    const SolverResult r = solve_functional(uniform_two(), v, cfg);
    ASSERT_TRUE(r.converged());
    EXPECT_NEAR(r.x(0), 1.0, 1e-6);
    EXPECT_NEAR(r.x(0), r.x(1), 1e-15);
    EXPECT_LE(residual(uniform_two(), r.x).norm1, 2 * kEps);
  }
}

TEST(SolveFunctional, ReportsMaxIterations) {
  SolverConfig cfg;
  cfg.maxIterations = 5;
  const SolverResult r =
      solve_functional(family_at(3, 1, 1.01), FunctionalVariant::Thicknesses, cfg);
  EXPECT_EQ(r.status, SolverStatus::MaxIterations);
  EXPECT_EQ(r.iterations, 5);
  EXPECT_EQ(r.residualHistory.size(), 6u);
}

TEST(SolveFunctional, RejectsBadConfig) {
  SolverConfig cfg;
  cfg.epsilon = 0.0;
  EXPECT_THROW(solve_functional(gen_scalar(0.75), FunctionalVariant::Natural, cfg), Error);
  cfg.epsilon = 1e-13;
  cfg.maxIterations = -1;
  EXPECT_THROW(solve_newton(gen_scalar(0.75), cfg), Error);
}

TEST(SolveNewton, ScalarQuadraticDecay) {
  const SolverResult r = solve_newton(gen_scalar(0.75));
  ASSERT_TRUE(r.converged());
  EXPECT_NEAR(r.x(0), scalar_root(0.75), 1e-14);
  // r_{k+1} <= C r_k^2 once in the quadratic regime.
  const auto& h = r.residualHistory;
  ASSERT_GE(h.size(), 4u);
  for (std::size_t k = 1; k + 1 < h.size(); ++k) {
    if (h[k] < 1e-2 && h[k + 1] > 1e-15) EXPECT_LE(h[k + 1], 10.0 * h[k] * h[k]) << k;
  }
}

TEST(SolveNewton, AffineProblemOneStep) {
  const Problem p = validate_problem(Vector::Ones(2), Matrix::Zero(2, 4));
  const SolverResult r = solve_newton(p);
  ASSERT_TRUE(r.converged());
  EXPECT_EQ(r.iterations, 1);
  EXPECT_TRUE(r.x.isApprox(Vector::Ones(2)));
}

TEST(SolveNewton, CriticalScalarHalvesTheError) {
  const SolverResult r = solve_newton(gen_scalar(0.5), SolverConfig{.recordIterates = true});
  ASSERT_TRUE(r.converged());
  EXPECT_NEAR(r.x(0), 1.0, 1e-6);
  // Oracle: iterate x' = x - F(x)/F'(x) directly for F = x - 0.5 - 0.5 x^2.
  double x = 0.0;
  for (std::size_t k = 1; k < r.iterates.size(); ++k) {
    const double prev = 1.0 - x;
    x -= (x - 0.5 - 0.5 * x * x) / (1.0 - x);
    EXPECT_NEAR(r.iterates[k](0), x, 1e-14);
    EXPECT_NEAR((1.0 - x) / prev, 0.5, 1e-12);
  }
}

TEST(NormalizationAlpha, Examples) {
  const Vector one = Vector::Ones(1);
  EXPECT_NEAR(normalization_alpha(gen_scalar(0.75), one, one), 2.0 / 3.0, 1e-15);
  // Denominator 0.5 is fine; the linear term vanishes so alpha = 0.
  EXPECT_EQ(normalization_alpha(gen_scalar(0.5), one, one), 0.0);
}

TEST(NormalizationAlpha, DegenerateDenominatorThrows) {
  // Only pairs (0, 1) are ever produced, so b(e_0, e_0) = 0.
  Matrix B = Matrix::Zero(2, 4);
  B(0, 1) = 0.5;
  B(1, 1) = 0.5;
  const Problem p = validate_problem(Vector::Constant(2, 0.5), B);
  Vector u = Vector::Zero(2);
  u(0) = 1.0;
  try {
    normalization_alpha(p, u, Vector::Ones(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateNormalization);
  }
}

TEST(NormalizationAlpha, PropertySatisfiesOrthogonality) {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> dist(0.05, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const Problem p = gen_family(FamilySpec{n, 900u + static_cast<unsigned>(trial)}, 0.8);
    const auto m = static_cast<Eigen::Index>(n);
    Vector u(m), w(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      u(i) = dist(rng);
      w(i) = dist(rng);
    }
    const double alpha = normalization_alpha(p, u, w);
    const Vector y = alpha * u;
    const Vector e = Vector::Ones(m);
    const double orth = w.dot(y - apply_bilinear(p, y, e) - apply_bilinear(p, e, y) +
                              apply_bilinear(p, y, y));
    EXPECT_NEAR(orth, 0.0, 1e-12 * std::max(1.0, std::abs(alpha)));
  }
}

TEST(SolvePerron, ScalarLandsInOneStep) {
  const SolverResult r = solve_perron(gen_scalar(0.75));
  ASSERT_TRUE(r.converged());
  EXPECT_EQ(r.iterations, 1);
  EXPECT_NEAR(r.y(0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.x(0), 1.0 / 3.0, 1e-15);
}

TEST(SolvePerron, SubcriticalSkipsTheTrivialSolution) {
  // Nonzero root of y = beta (2 - y) y with beta = 0.25 is y = -2.
  const SolverResult r = solve_perron(gen_scalar(0.25));
  ASSERT_TRUE(r.converged());
  EXPECT_NEAR(r.y(0), -2.0, 1e-14);
  EXPECT_NEAR(r.x(0), 3.0, 1e-14);
}

TEST(SolvePerron, NearCriticalNeedsNoMoreIterationsThanFarFromCritical) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const FamilySpec spec{2, seed};
    const SolverResult near = solve_perron(gen_family(spec, find_param_for_rho(spec, 1.01)));
    const SolverResult far = solve_perron(gen_family(spec, 1.0));
    ASSERT_TRUE(near.converged());
    ASSERT_TRUE(far.converged());
    EXPECT_LE(near.iterations, far.iterations) << "seed " << seed;
  }
}

TEST(SolvePerron, StoppingContract) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Problem p = family_at(2 + seed % 7, seed, 1.05 + 0.05 * static_cast<double>(seed));
    const SolverResult r = solve_perron(p);
    ASSERT_TRUE(r.converged()) << seed;
    const double n = static_cast<double>(p.n());
    EXPECT_LT((build_Hy(p, r.y) * r.y - r.y).lpNorm<1>(), n * kEps);
    EXPECT_LE(residual(p, Vector::Ones(r.x.size()) - r.y).norm1, 10 * n * kEps);
    EXPECT_EQ(r.residualHistory.size(), static_cast<std::size_t>(r.iterations) + 1);
  }
}

TEST(SolvePerron, NormalizationHoldsAtEveryIterate) {
  const Problem p = family_at(5, 77, 1.4);
  const Vector w = weight_vector(p, WeightChoice::LeftPerron);
  SolverConfig cfg;
  cfg.recordIterates = true;
  const SolverResult r = solve_perron(p, w, cfg);
  ASSERT_TRUE(r.converged());
  const Vector e = Vector::Ones(5);
  for (std::size_t k = 1; k < r.iterates.size(); ++k) {
    const Vector y = e - r.iterates[k];
    const double orth = w.dot(y - apply_bilinear(p, y, e) - apply_bilinear(p, e, y) +
                              apply_bilinear(p, y, y));
    EXPECT_NEAR(orth, 0.0, 1e-10) << k;
  }
}

TEST(SolvePerron, WeightChoicesAllConvergeNearCritical) {
  const Problem p = family_at(4, 8, 1.02);
  const SolverResult ref = solve_newton(p);
  for (auto w : {WeightChoice::LeftPerron, WeightChoice::RightPerron, WeightChoice::Ones}) {
    SolverConfig cfg;
    cfg.weight = w;
    const SolverResult r = solve_perron(p, cfg);
    ASSERT_TRUE(r.converged()) << to_string(w);
    EXPECT_LE((r.x - ref.x).lpNorm<Eigen::Infinity>(), 1e-9);
  }
}

TEST(SolvePerron, CriticalScalarStopsAtTrivialFixedPoint) {
  const SolverResult r = solve_perron(gen_scalar(0.5));
  ASSERT_TRUE(r.converged());
  EXPECT_EQ(r.y(0), 0.0);
}

TEST(SolvePerron, ReportsMaxIterations) {
  SolverConfig cfg;
  cfg.maxIterations = 2;
  const SolverResult r = solve_perron(family_at(3, 4, 1.8), cfg);
  EXPECT_EQ(r.status, SolverStatus::MaxIterations);
  EXPECT_EQ(r.iterations, 2);
}

TEST(Solvers, MonotoneIteratesBoundedBySolution) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Problem p = family_at(2 + seed % 6, 40 + seed, 1.1 + 0.1 * static_cast<double>(seed));
    const Vector x_star = solve_newton(p).x;
    SolverConfig cfg;
    cfg.recordIterates = true;
    for (const char* id : {"natural", "depth", "order", "thicknesses", "newton"}) {
      const SolverResult r = solve_by_id(p, id, cfg);
      ASSERT_TRUE(r.converged()) << id;
      for (std::size_t k = 0; k + 1 < r.iterates.size(); ++k) {
        EXPECT_GE((r.iterates[k + 1] - r.iterates[k]).minCoeff(), 0.0) << id << " k=" << k;
        EXPECT_LE((r.iterates[k + 1] - x_star).maxCoeff(), 1e-12) << id << " k=" << k;
      }
    }
  }
}

TEST(Solvers, AllConvergedSolversAgree) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const FamilySpec spec{n, rng()};
    const double rho = 1.01 + unit(rng) * (family_max_rho(spec) - 1.01);
    const Problem p = gen_family(spec, find_param_for_rho(spec, rho));
    std::vector<Vector> xs;
    for (const auto& id : solver_ids()) {
      const SolverResult r = solve_by_id(p, id);
      if (r.converged()) xs.push_back(r.x);
    }
    ASSERT_GE(xs.size(), 5u);
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = i + 1; j < xs.size(); ++j)
        EXPECT_LE((xs[i] - xs[j]).lpNorm<Eigen::Infinity>(), 1e-8);
  }
}

TEST(Solvers, UnknownIdThrows) {
  EXPECT_THROW(solve_by_id(gen_scalar(0.75), "bisection"), Error);
  EXPECT_THROW(parse_weight_choice("median"), Error);
  EXPECT_EQ(parse_weight_choice("ones"), WeightChoice::Ones);
}

}  // namespace
}  // namespace qve
