#include "qve/core.hpp"

#include <string>
#include <vector>

#include "qve/spectral.hpp"

namespace qve {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::StochasticityViolation: return "StochasticityViolation";
    case ErrorCode::ReducibleR: return "ReducibleR";
    case ErrorCode::NotNonnegative: return "NotNonnegative";
    case ErrorCode::Reducible: return "Reducible";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ComplexDominant: return "ComplexDominant";
    case ErrorCode::SingularLinearSolve: return "SingularLinearSolve";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::DegenerateNormalization: return "DegenerateNormalization";
    case ErrorCode::DegenerateProjector: return "DegenerateProjector";
    case ErrorCode::NotASolution: return "NotASolution";
    case ErrorCode::NotCritical: return "NotCritical";
    case ErrorCode::InsufficientHistory: return "InsufficientHistory";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::TargetUnreachable: return "TargetUnreachable";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

const char* to_string(Criticality c) noexcept {
  switch (c) {
    case Criticality::Subcritical: return "subcritical";
    case Criticality::Critical: return "critical";
    case Criticality::Supercritical: return "supercritical";
  }
  return "unknown";
}

namespace {

void require_length(const Problem& p, const Vector& v, const char* name) {
  if (static_cast<std::size_t>(v.size()) != p.n()) {
    throw Error(ErrorCode::ShapeMismatch,
                std::string(name) + " has length " + std::to_string(v.size()) +
                    ", expected " + std::to_string(p.n()));
  }
}

}  // namespace

Problem validate_problem(const Vector& a, const Matrix& B, double tol) {
  const Eigen::Index n = a.size();
  if (n < 1) throw Error(ErrorCode::ShapeMismatch, "n must be positive");
  if (B.rows() != n || B.cols() != n * n) {
    throw Error(ErrorCode::ShapeMismatch,
                "B is " + std::to_string(B.rows()) + "x" +
                    std::to_string(B.cols()) + ", expected " +
                    std::to_string(n) + "x" + std::to_string(n * n));
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::OutOfRange, "tol must be positive");
  if (!a.allFinite() || !B.allFinite()) {
    throw Error(ErrorCode::NegativeEntry, "non-finite entry");
  }
  if ((a.array() < 0.0).any() || (B.array() < 0.0).any()) {
    throw Error(ErrorCode::NegativeEntry, "a and B must be nonnegative");
  }

  const Vector row_sums = B.rowwise().sum();
  const double defect = (a + row_sums - Vector::Ones(n)).cwiseAbs().maxCoeff();
  if (defect > tol) {
    throw Error(ErrorCode::StochasticityViolation,
                "||a + B(e(x)e) - e||_inf = " + std::to_string(defect));
  }

  // Re-projection can leave a rounding-level negative when a row of B sums
  // to one; those entries are death probabilities of zero.
  Vector projected = (Vector::Ones(n) - row_sums).cwiseMax(0.0);
  return Problem(std::move(projected), B);
}

Vector apply_bilinear(const Problem& p, const Vector& u, const Vector& v) {
  require_length(p, u, "u");
  require_length(p, v, "v");
  const Eigen::Index n = static_cast<Eigen::Index>(p.n());
  Vector out = Vector::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (u(j) == 0.0) continue;
    out.noalias() += u(j) * (p.B().middleCols(j * n, n) * v);
  }
  return out;
}

Matrix left_matrix(const Problem& p, const Vector& u) {
  require_length(p, u, "u");
  const Eigen::Index n = static_cast<Eigen::Index>(p.n());
  Matrix M = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    M.noalias() += u(j) * p.B().middleCols(j * n, n);
  }
  return M;
}

Matrix right_matrix(const Problem& p, const Vector& v) {
  require_length(p, v, "v");
  const Eigen::Index n = static_cast<Eigen::Index>(p.n());
  Matrix M(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    M.col(j).noalias() = p.B().middleCols(j * n, n) * v;
  }
  return M;
}

Matrix mean_matrix(const Problem& p) {
  const Vector e = Vector::Ones(static_cast<Eigen::Index>(p.n()));
  return left_matrix(p, e) + right_matrix(p, e);
}

bool is_irreducible(const Matrix& M) {
  const Eigen::Index n = M.rows();
  if (n != M.cols()) return false;
  if (n <= 1) return true;

  // Strongly connected iff node 0 reaches everything along edges and along
  // reversed edges.
  auto reaches_all = [&](bool transpose) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<Eigen::Index> stack{0};
    seen[0] = 1;
    Eigen::Index count = 1;
    while (!stack.empty()) {
      const Eigen::Index i = stack.back();
      stack.pop_back();
      for (Eigen::Index j = 0; j < n; ++j) {
        const double entry = transpose ? M(j, i) : M(i, j);
        if (entry != 0.0 && !seen[static_cast<std::size_t>(j)]) {
          seen[static_cast<std::size_t>(j)] = 1;
          ++count;
          stack.push_back(j);
        }
      }
    }
    return count == n;
  };
  return reaches_all(false) && reaches_all(true);
}

CriticalityReport criticality(const Problem& p, double tol) {
  const Matrix R = mean_matrix(p);
  if (!is_irreducible(R)) {
    throw Error(ErrorCode::ReducibleR, "b(e,.) + b(.,e) is reducible");
  }
  CriticalityReport report;
  report.criticalTolerance = tol;
  // An all-zero 1x1 R is "irreducible" by convention but has no Perron pair.
  report.rhoR = R.isZero(0.0) ? 0.0 : spectral::perron_pair(R).lambda;
  if (report.rhoR > 1.0 + tol) {
    report.klass = Criticality::Supercritical;
  } else if (report.rhoR < 1.0 - tol) {
    report.klass = Criticality::Subcritical;
  } else {
    report.klass = Criticality::Critical;
  }
  return report;
}

ResidualReport residual(const Problem& p, const Vector& x) {
  require_length(p, x, "x");
  ResidualReport report;
  report.vector = x - p.a() - apply_bilinear(p, x, x);
  report.norm1 = report.vector.lpNorm<1>();
  return report;
}

Matrix build_Hy(const Problem& p, const Vector& y) {
  require_length(p, y, "y");
  const Vector e = Vector::Ones(static_cast<Eigen::Index>(p.n()));
  return right_matrix(p, e) + left_matrix(p, e - y);
}

}  // namespace qve
