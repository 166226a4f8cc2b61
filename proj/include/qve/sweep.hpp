#pragma once

// Benchmark sweeps over a generated family and the rate analysis behind the
// `analyze` command.

#include <optional>
#include <string>
#include <vector>

#include "qve/analysis.hpp"
#include "qve/problems.hpp"
#include "qve/solvers.hpp"

namespace qve {

struct SweepRecord {
  std::optional<double> familyParam;  // empty when the target is unreachable
  double rhoR = 0.0;
  std::string solver;
  std::string status;
  long iterations = 0;
  double elapsedSeconds = 0.0;
  std::optional<double> finalResidual;
  std::optional<double> predictedRate;
  std::optional<double> empiricalRate;
};

struct SweepOptions {
  FamilySpec family;
  std::vector<double> rhoTargets;
  std::vector<std::string> solvers;
  SolverConfig config;
  int repeats = 1;
};

/// One record per (target, solver), timed as the median over `repeats`
/// solves. Rows are ordered by familyParam then solver id; unreachable
/// targets come last, marked with status "TargetUnreachable".
std::vector<SweepRecord> run_sweep(const SweepOptions& options);

inline constexpr const char* kSweepCsvHeader =
    "familyParam,rhoR,solver,status,iterations,elapsedSeconds,finalResidual,"
    "predictedRate,empiricalRate";

std::string sweep_to_csv(const std::vector<SweepRecord>& records);

/// rho of the Jacobian of the Perron map at the Newton reference solution.
/// Empty when the solution or the projector is degenerate.
std::optional<double> predicted_perron_rate(const Problem& p,
                                            const Vector& w);

struct AnalysisReport {
  RateReport rates;
  double rhoR = 0.0;
  WeightChoice weight = WeightChoice::LeftPerron;
  SolverResult reference;  // Newton
  SolverResult perron;
};

/// Problems with rho(R) at or below this are treated as near-critical and
/// get a limitRate computed on their critical rescaling.
inline constexpr double kNearCriticalRho = 1.1;

AnalysisReport analyze(const Problem& p, WeightChoice weight,
                       const SolverConfig& config = {});

std::string analysis_to_json(const AnalysisReport& report);

/// The critical member of the scaling family through p: B / rho(R).
Problem critical_rescaling(const Problem& p);

}  // namespace qve
