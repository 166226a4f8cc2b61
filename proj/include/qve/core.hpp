#pragma once

// Problem data for the quadratic vector equation x = a + B(x (x) x) and the
// bilinear form b(u, v) = B(u (x) v) built from it.
//
// Column convention: with 0-based j, k the column c = j * n + k of B
// multiplies u_j * v_k, i.e. the Kronecker stacking of u (x) v.

#include <Eigen/Dense>

#include <cstddef>

#include "qve/error.hpp"

namespace qve {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kDefaultValidationTol = 1e-12;
inline constexpr double kDefaultCriticalTol = 1e-12;

/// A validated Markovian binary tree. Immutable after construction; the only
/// way to build one is validate_problem(), which guarantees that e solves the
/// equation to machine precision.
class Problem {
 public:
  std::size_t n() const noexcept { return static_cast<std::size_t>(a_.size()); }
  const Vector& a() const noexcept { return a_; }
  const Matrix& B() const noexcept { return B_; }

 private:
  Problem(Vector a, Matrix B) : a_(std::move(a)), B_(std::move(B)) {}
  friend Problem validate_problem(const Vector&, const Matrix&, double);

  Vector a_;
  Matrix B_;
};

enum class Criticality { Subcritical, Critical, Supercritical };

const char* to_string(Criticality c) noexcept;

struct CriticalityReport {
  double rhoR = 0.0;
  Criticality klass = Criticality::Critical;
  double criticalTolerance = kDefaultCriticalTol;
};

struct ResidualReport {
  Vector vector;
  double norm1 = 0.0;
};

/// Checks nonnegativity, shape and a + B(e (x) e) = e within `tol`, then
/// re-projects a onto e - B(e (x) e) so that e is an exact solution.
Problem validate_problem(const Vector& a, const Matrix& B,
                         double tol = kDefaultValidationTol);

/// b(u, v) = B(u (x) v).
Vector apply_bilinear(const Problem& p, const Vector& u, const Vector& v);

/// The matrix M with M v = b(u, v), i.e. b(u, .).
Matrix left_matrix(const Problem& p, const Vector& u);

/// The matrix M with M u = b(u, v), i.e. b(., v).
Matrix right_matrix(const Problem& p, const Vector& v);

/// R = b(e, .) + b(., e).
Matrix mean_matrix(const Problem& p);

/// True iff the directed graph on the nonzero pattern of M is strongly
/// connected. A 1x1 matrix counts as irreducible.
bool is_irreducible(const Matrix& M);

CriticalityReport criticality(const Problem& p,
                              double tol = kDefaultCriticalTol);

ResidualReport residual(const Problem& p, const Vector& x);

/// H_y = b(., e) + b(e, .) - b(y, .). Entries go negative once some y_i
/// exceeds 1; that is allowed.
Matrix build_Hy(const Problem& p, const Vector& y);

}  // namespace qve
