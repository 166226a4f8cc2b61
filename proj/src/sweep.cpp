#include "qve/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <json.hpp>

#include "qve/io.hpp"
#include "qve/spectral.hpp"

namespace qve {

namespace {

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::optional<double> try_rate(const std::vector<double>& history) {
  try {
    return estimate_linear_rate(history);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string csv_field(const std::optional<double>& value) {
  return value ? io::format_double(*value) : std::string();
}

}  // namespace

std::optional<double> predicted_perron_rate(const Problem& p,
                                            const Vector& w) {
  try {
    const SolverResult ref = solve_newton(p);
    if (!ref.converged()) return std::nullopt;
    return spectral::spectral_radius(jacobian_at_solution(p, ref.y, w));
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::vector<SweepRecord> run_sweep(const SweepOptions& options) {
  if (options.repeats < 1) {
    throw Error(ErrorCode::OutOfRange, "repeats must be >= 1");
  }
  for (const auto& id : options.solvers) {
    if (std::find(solver_ids().begin(), solver_ids().end(), id) ==
        solver_ids().end()) {
      throw Error(ErrorCode::ParseError, "unknown solver '" + id + "'");
    }
  }

  std::vector<SweepRecord> records;
  for (double target : options.rhoTargets) {
    double param = 0.0;
    try {
      param = find_param_for_rho(options.family, target);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::TargetUnreachable) throw;
      for (const auto& id : options.solvers) {
        SweepRecord row;
        row.rhoR = target;
        row.solver = id;
        row.status = "TargetUnreachable";
        records.push_back(std::move(row));
      }
      continue;
    }

    const Problem p = gen_family(options.family, param);
    const double rho = criticality(p).rhoR;
    for (const auto& id : options.solvers) {
      SweepRecord row;
      row.familyParam = param;
      row.rhoR = rho;
      row.solver = id;

      std::vector<double> times;
      try {
        SolverResult first;
        for (int r = 0; r < options.repeats; ++r) {
          SolverResult result = solve_by_id(p, id, options.config);
          times.push_back(result.elapsed);
          if (r == 0) first = std::move(result);
        }
        row.status = to_string(first.status);
        row.iterations = first.iterations;
        row.elapsedSeconds = median(times);
        row.finalResidual = residual(p, first.x).norm1;
        row.empiricalRate = try_rate(first.residualHistory);
        if (id == "perron") {
          row.predictedRate =
              predicted_perron_rate(p, weight_vector(p, options.config.weight));
        }
      } catch (const Error& err) {
        row.status = std::string(to_string(err.code()));
      }
      records.push_back(std::move(row));
    }
  }

  std::stable_sort(records.begin(), records.end(),
                   [](const SweepRecord& l, const SweepRecord& r) {
                     const bool lu = !l.familyParam, ru = !r.familyParam;
                     if (lu != ru) return ru;
                     if (lu) return std::tie(l.rhoR, l.solver) < std::tie(r.rhoR, r.solver);
                     return std::tie(*l.familyParam, l.solver) <
                            std::tie(*r.familyParam, r.solver);
                   });
  return records;
}

std::string sweep_to_csv(const std::vector<SweepRecord>& records) {
  std::string out = std::string(kSweepCsvHeader) + "\n";
  for (const auto& r : records) {
    out += csv_field(r.familyParam) + "," + io::format_double(r.rhoR) + "," +
           r.solver + "," + r.status + "," + std::to_string(r.iterations) + "," +
           io::format_double(r.elapsedSeconds) + "," + csv_field(r.finalResidual) +
           "," + csv_field(r.predictedRate) + "," + csv_field(r.empiricalRate) +
           "\n";
  }
  return out;
}

Problem critical_rescaling(const Problem& p) {
  const double rho = spectral::perron_pair(mean_matrix(p)).lambda;
  const Matrix B = p.B() / rho;
  const Vector a = (Vector::Ones(B.rows()) - B.rowwise().sum()).cwiseMax(0.0);
  return validate_problem(a, B);
}

AnalysisReport analyze(const Problem& p, WeightChoice weight,
                       const SolverConfig& config) {
  AnalysisReport report;
  report.weight = weight;
  report.rhoR = criticality(p).rhoR;
  if (!(report.rhoR > 1.0)) {
    throw Error(ErrorCode::OutOfRange,
                "analysis needs a supercritical problem, rho(R) = " +
                    std::to_string(report.rhoR));
  }

  const Vector w = weight_vector(p, weight);
  report.reference = solve_newton(p, config);
  if (!report.reference.converged()) {
    throw Error(ErrorCode::NoConvergence, "Newton reference did not converge");
  }
  const Matrix J = jacobian_at_solution(p, report.reference.y, w);
  report.rates.spectralRadius = spectral::spectral_radius(J);
  report.rates.predictedRate = report.rates.spectralRadius;

  SolverConfig perron_config = config;
  perron_config.weight = weight;
  report.perron = solve_perron(p, w, perron_config);
  report.rates.empiricalRate = try_rate(report.perron.residualHistory);

  if (report.rhoR <= kNearCriticalRho) {
    const Problem critical = critical_rescaling(p);
    report.rates.limitRate =
        limit_rate(critical, weight_vector(critical, weight));
  }
  return report;
}

std::string analysis_to_json(const AnalysisReport& report) {
  nlohmann::ordered_json doc;
  doc["rhoR"] = report.rhoR;
  doc["wChoice"] = to_string(report.weight);
  doc["spectralRadius"] = report.rates.spectralRadius;
  doc["predictedRate"] = report.rates.predictedRate;
  doc["empiricalRate"] = report.rates.empiricalRate
                             ? nlohmann::ordered_json(*report.rates.empiricalRate)
                             : nlohmann::ordered_json(nullptr);
  doc["limitRate"] = report.rates.limitRate
                         ? nlohmann::ordered_json(*report.rates.limitRate)
                         : nlohmann::ordered_json(nullptr);
  doc["perronStatus"] = to_string(report.perron.status);
  doc["perronIterations"] = report.perron.iterations;
  doc["newtonIterations"] = report.reference.iterations;
  return doc.dump(2) + "\n";
}

}  // namespace qve
