#include "qve/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qve/rng.hpp"
#include "qve/spectral.hpp"

namespace qve {

double CounterRng::normal() noexcept {
  // 1 - uniform() lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

constexpr double kRingTerm = 0.01;
constexpr long kExactThreshold = 256;

Problem problem_from_B(Matrix B) {
  const auto n = B.rows();
  Vector a = (Vector::Ones(n) - B.rowwise().sum()).cwiseMax(0.0);
  return validate_problem(a, B, kDefaultValidationTol);
}

// Binomial(trials, prob). Exact below kExactThreshold trials or when the
// expected number of rare outcomes is small; normal approximation otherwise.
long long draw_binomial(long long trials, double prob, CounterRng& rng) {
  if (trials <= 0 || prob <= 0.0) return 0;
  if (prob >= 1.0) return trials;
  if (trials <= kExactThreshold) {
    long long hits = 0;
    for (long long i = 0; i < trials; ++i) hits += rng.uniform() < prob;
    return hits;
  }
  const bool flip = prob > 0.5;
  const double q = flip ? 1.0 - prob : prob;
  const double mean = static_cast<double>(trials) * q;
  long long hits = 0;
  if (mean < 30.0) {
    // Geometric skipping between successes.
    const double log_miss = std::log1p(-q);
    long long position = 0;
    while (true) {
      const double u = 1.0 - rng.uniform();
      position += static_cast<long long>(std::floor(std::log(u) / log_miss)) + 1;
      if (position > trials) break;
      ++hits;
    }
  } else {
    const double sd = std::sqrt(mean * (1.0 - q));
    const double draw = std::round(mean + sd * rng.normal());
    hits = static_cast<long long>(
        std::clamp(draw, 0.0, static_cast<double>(trials)));
  }
  return flip ? trials - hits : hits;
}

// Outcome 0 is death; outcome 1 + c is the offspring pair of column c.
struct OutcomeTable {
  std::vector<double> probs;
  std::vector<double> cumulative;
};

}  // namespace

Matrix family_base(const FamilySpec& spec) {
  if (spec.n < 1) throw Error(ErrorCode::OutOfRange, "n must be positive");
  const auto n = static_cast<Eigen::Index>(spec.n);
  CounterRng rng = CounterRng(spec.seed).substream(spec.n);
  Matrix base(n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < n * n; ++c) base(i, c) = rng.uniform();
    const Eigen::Index next = (i + 1) % n;
    base(i, next * n + next) += kRingTerm;
  }
  return base;
}

Problem gen_scalar(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::OutOfRange,
                "beta must lie in [0, 1], got " + std::to_string(beta));
  }
  return validate_problem(Vector::Constant(1, 1.0 - beta),
                          Matrix::Constant(1, 1, beta));
}

Problem gen_family(const FamilySpec& spec, double param) {
  if (!(param >= 0.0 && param <= 1.0)) {
    throw Error(ErrorCode::OutOfRange,
                "family parameter must lie in [0, 1], got " +
                    std::to_string(param));
  }
  const Matrix base = family_base(spec);
  const double c_max = 1.0 / base.rowwise().sum().maxCoeff();
  return problem_from_B((param * c_max) * base);
}

double family_max_rho(const FamilySpec& spec) {
  return spectral::perron_pair(mean_matrix(gen_family(spec, 1.0))).lambda;
}

double find_param_for_rho(const FamilySpec& spec, double target_rho) {
  if (!(target_rho >= 0.0)) {
    throw Error(ErrorCode::OutOfRange, "target rho(R) must be nonnegative");
  }
  const double max_rho = family_max_rho(spec);
  if (target_rho > max_rho) {
    throw Error(ErrorCode::TargetUnreachable,
                "rho(R) = " + std::to_string(target_rho) +
                    " exceeds the family maximum " + std::to_string(max_rho));
  }
  // R scales linearly with the parameter.
  return std::min(1.0, target_rho / max_rho);
}

McEstimate monte_carlo_extinction(const Problem& p, long trials, long horizon,
                                  std::uint64_t seed) {
  if (trials < 1 || horizon < 1) {
    throw Error(ErrorCode::OutOfRange, "trials and horizon must be >= 1");
  }
  const auto n = static_cast<Eigen::Index>(p.n());
  const auto pairs = n * n;

  std::vector<OutcomeTable> tables(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& t = tables[static_cast<std::size_t>(i)];
    t.probs.push_back(p.a()(i));
    for (Eigen::Index c = 0; c < pairs; ++c) t.probs.push_back(p.B()(i, c));
    double acc = 0.0;
    for (double q : t.probs) t.cumulative.push_back(acc += q);
  }

  McEstimate est;
  est.trials = trials;
  est.extinction = Vector::Zero(n);
  est.std_error = Vector::Zero(n);

  const CounterRng root(seed);
  std::vector<long long> counts(static_cast<std::size_t>(n));
  std::vector<long long> next(static_cast<std::size_t>(n));

  auto add_pair = [&](Eigen::Index column, long long m) {
    next[static_cast<std::size_t>(column / n)] += m;
    next[static_cast<std::size_t>(column % n)] += m;
  };

  for (Eigen::Index start = 0; start < n; ++start) {
    const CounterRng start_stream = root.substream(static_cast<std::uint64_t>(start));
    long extinct = 0;
    for (long trial = 0; trial < trials; ++trial) {
      CounterRng rng = start_stream.substream(static_cast<std::uint64_t>(trial));
      std::fill(counts.begin(), counts.end(), 0);
      counts[static_cast<std::size_t>(start)] = 1;

      bool died = false;
      bool capped = false;
      for (long gen = 0; gen <= horizon; ++gen) {
        long long total = 0;
        for (long long c : counts) total += c;
        if (total == 0) {
          died = true;
          break;
        }
        if (total >= kPopulationCap) {
          capped = true;
          break;
        }
        if (gen == horizon) break;

        std::fill(next.begin(), next.end(), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
          const long long c = counts[static_cast<std::size_t>(i)];
          if (c == 0) continue;
          const auto& table = tables[static_cast<std::size_t>(i)];
          if (c <= kExactThreshold) {
            const double scale = table.cumulative.back();
            for (long long k = 0; k < c; ++k) {
              const double u = rng.uniform() * scale;
              const auto it = std::upper_bound(table.cumulative.begin(),
                                               table.cumulative.end(), u);
              const auto outcome = std::min<std::ptrdiff_t>(
                  it - table.cumulative.begin(),
                  static_cast<std::ptrdiff_t>(table.probs.size()) - 1);
              if (outcome > 0) add_pair(outcome - 1, 1);
            }
            continue;
          }
          // Multinomial split by sequential conditional binomials.
          long long remaining = c;
          double mass = table.cumulative.back();
          for (std::size_t o = 0; o < table.probs.size() && remaining > 0; ++o) {
            const bool last = o + 1 == table.probs.size();
            const long long m =
                last ? remaining
                     : draw_binomial(remaining,
                                     mass > 0.0 ? table.probs[o] / mass : 1.0,
                                     rng);
            mass -= table.probs[o];
            remaining -= m;
            if (o > 0 && m > 0) add_pair(static_cast<Eigen::Index>(o) - 1, m);
          }
        }
        counts.swap(next);
      }
      if (died) {
        ++extinct;
      } else if (!capped) {
        ++est.truncated;
      }
    }
    const double phat = static_cast<double>(extinct) / static_cast<double>(trials);
    est.extinction(start) = phat;
    est.std_error(start) = std::sqrt(phat * (1.0 - phat) / static_cast<double>(trials));
  }
  return est;
}

}  // namespace qve
