#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "chainamp/chain_bell.hpp"
#include "chainamp/epsilon.hpp"
#include "chainamp/prob_dist.hpp"
#include "chainamp/sv_source.hpp"

// Monte Carlo run of the protocol: each trial draws 2r setting bits from the
// (possibly adversarial) source, keeps the trial when they name a chain pair,
// then draws outcomes from the adversary's box mixture.  All statistics are
// exact functions of integer counters, so reports from different schedules
// of the same seed are bit-identical.

namespace chainamp {

enum class SvKind { honest_uniform, fixed_labeling, sampled };

struct SvPart {
  SvKind kind = SvKind::honest_uniform;
  ExtremalLabeling labeling;  // fixed_labeling
  ProbDist dist;              // sampled

  static SvPart honest() { return SvPart{}; }
  static SvPart fixed(ExtremalLabeling lab) {
    return SvPart{SvKind::fixed_labeling, std::move(lab), {}};
  }
  static SvPart sampled_from(ProbDist d) { return SvPart{SvKind::sampled, {}, std::move(d)}; }
};

struct AdversaryStrategy {
  SvPart sv;
  std::vector<std::pair<double, Box>> boxes;
};

struct SimReport {
  std::uint64_t trials = 0;
  std::uint64_t kept = 0;
  std::uint64_t bell_fail_count = 0;
  std::uint64_t alice_zero_count = 0;
  std::vector<std::uint64_t> pair_counts;

  double bell_value = 0.0;
  double bell_se = 0.0;
  double alice_bias = 0.0;  // empirical P(a = 0) - 1/2, signed
  double alice_bias_se = 0.0;
  double min_pair_prob = 0.0;

  bool operator==(const SimReport&) const = default;
};

SimReport run_protocol(int r, const Epsilon& sv, const AdversaryStrategy& strategy,
                       std::uint64_t trials, std::uint64_t master_seed, int threads = 0);
SimReport run_protocol_serial(int r, const Epsilon& sv, const AdversaryStrategy& strategy,
                              std::uint64_t trials, std::uint64_t master_seed);

// One run per strategy, with per-cell seeds derived from the master seed.
std::vector<SimReport> sweep_strategies(int r, const Epsilon& sv,
                                        const std::vector<AdversaryStrategy>& strategies,
                                        std::uint64_t trials, std::uint64_t master_seed,
                                        int threads = 0);

}  // namespace chainamp
