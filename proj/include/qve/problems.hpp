#pragma once

// Problem generators and a Monte-Carlo branching-process oracle.

#include <cstdint>

#include "qve/core.hpp"

namespace qve {

/// One-parameter family B(t) = t * c_max * baseB, t in [0, 1], where baseB
/// is drawn from the seed and c_max = min_i 1 / (baseB (e (x) e))_i. rho(R)
/// is linear in t and the largest row of B sums to one at t = 1.
struct FamilySpec {
  std::size_t n = 2;
  std::uint64_t seed = 0;
};

/// Draws baseB for `spec`: i.i.d. uniform [0, 1) entries plus a ring term
/// 0.01 on the (i+1, i+1) pair of row i so that R is irreducible.
Matrix family_base(const FamilySpec& spec);

Problem gen_scalar(double beta);

Problem gen_family(const FamilySpec& spec, double param);

/// rho(R) at param = 1, the largest value the family reaches.
double family_max_rho(const FamilySpec& spec);

/// The param whose problem has rho(R) == target_rho (to ~1e-12). Throws
/// TargetUnreachable when target_rho exceeds family_max_rho.
double find_param_for_rho(const FamilySpec& spec, double target_rho);

struct McEstimate {
  Vector extinction;
  Vector std_error;  // sqrt(p (1 - p) / trials) per component
  long trials = 0;
  long truncated = 0;  // runs still alive (and under the cap) at the horizon
};

inline constexpr long kPopulationCap = 1'000'000;

/// Simulates `trials` independent colonies from each starting type. A run is
/// extinct if the population empties within `horizon` generations; runs that
/// reach the population cap or the horizon count as surviving.
McEstimate monte_carlo_extinction(const Problem& p, long trials, long horizon,
                                  std::uint64_t seed);

}  // namespace qve
