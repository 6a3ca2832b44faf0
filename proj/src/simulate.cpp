#include "chainamp/simulate.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chainamp/rng.hpp"

namespace chainamp {

namespace {

struct TrialContext {
  int r;
  int n_bits;
  ChainScenario sc;
  const AdversaryStrategy* strategy;
  double p_plus = 0.0;
  std::vector<double> source_alphas;  // per-prefix '+' probabilities, SvKind::sampled
  std::vector<double> box_cum;        // cumulative box weights
};

TrialContext make_context(int r, const Epsilon& sv, const AdversaryStrategy& strategy) {
  if (r < 1 || r > 15) throw std::invalid_argument("run_protocol: r must be in [1, 15]");
  const int N = 1 << r;
  TrialContext ctx{r, 2 * r, ChainScenario(N), &strategy, sv.p_plus(), {}, {}};

  switch (strategy.sv.kind) {
    case SvKind::honest_uniform:
      break;
    case SvKind::fixed_labeling:
      if (strategy.sv.labeling.n != 2 * r) {
        throw std::invalid_argument("run_protocol: labeling must cover 2r bits");
      }
      if (sv.eps == 0.0) throw std::invalid_argument("run_protocol: eps = 0 leaves no labeling freedom");
      break;
    case SvKind::sampled: {
      if (strategy.sv.dist.n != 2 * r) {
        throw std::invalid_argument("run_protocol: source distribution must cover 2r bits");
      }
      ctx.source_alphas = mixing_coordinates<double>(strategy.sv.dist, sv);
      break;
    }
  }

  if (strategy.boxes.empty()) throw std::invalid_argument("run_protocol: no boxes");
  double cum = 0.0;
  for (const auto& [w, box] : strategy.boxes) {
    if (w < 0.0) throw std::invalid_argument("run_protocol: negative box weight");
    if (box.N != N) throw std::invalid_argument("run_protocol: box N must equal 2^r");
    cum += w;
    ctx.box_cum.push_back(cum);
  }
  if (std::abs(cum - 1.0) > 1e-12) {
    throw std::invalid_argument("run_protocol: box weights must sum to 1");
  }
  ctx.box_cum.back() = 1.0;
  return ctx;
}

struct Counts {
  std::uint64_t kept = 0;
  std::uint64_t bell_fail = 0;
  std::uint64_t alice_zero = 0;
  std::vector<std::uint64_t> pair_counts;
};

// Draw order per trial is fixed: setting bits first (for the sampled source,
// a sign draw then a bit draw per prefix), then the box pick, then the
// outcome pair.
void run_one_trial(const TrialContext& ctx, std::uint64_t seed, std::uint64_t t, Counts& counts) {
  TrialRng rng(seed, t);
  const SvPart& sv = ctx.strategy->sv;

  std::size_t node = 0;
  std::uint64_t bits = 0;
  for (int i = 0; i < ctx.n_bits; ++i) {
    double p0;
    switch (sv.kind) {
      case SvKind::honest_uniform:
        p0 = 0.5;
        break;
      case SvKind::fixed_labeling:
        p0 = sv.labeling.at(node) == Sign::plus ? ctx.p_plus : 1.0 - ctx.p_plus;
        break;
      default:
        // Lazily realizes an extremal labeling along the path: sign first,
        // then the bit under that sign.
        p0 = rng.next_unit() < ctx.source_alphas[node] ? ctx.p_plus : 1.0 - ctx.p_plus;
        break;
    }
    std::uint64_t bit = rng.next_unit() < p0 ? 0 : 1;
    bits = (bits << 1) | bit;
    node = 2 * node + 1 + bit;
  }

  const int x = static_cast<int>(bits >> ctx.r);
  const int y = static_cast<int>(bits & ((std::uint64_t{1} << ctx.r) - 1));
  const int pair = ctx.sc.chain_pair_index(x, y);
  if (pair < 0) return;

  std::size_t which = 0;
  double u = rng.next_unit();
  while (which + 1 < ctx.box_cum.size() && u >= ctx.box_cum[which]) ++which;
  const Box& box = ctx.strategy->boxes[which].second;

  double v = rng.next_unit();
  int a = 0, b = 0;
  double cum = 0.0;
  for (int out = 0; out < 4; ++out) {
    a = out >> 1;
    b = out & 1;
    cum += box.p(a, b, x, y);
    if (v < cum) break;
  }

  const bool fail = ctx.sc.is_wrap_pair(x, y) ? ((a ^ b) == 0) : ((a ^ b) == 1);
  ++counts.kept;
  if (fail) ++counts.bell_fail;
  if (a == 0) ++counts.alice_zero;
  ++counts.pair_counts[static_cast<std::size_t>(pair)];
}

SimReport report_from_counts(std::uint64_t trials, const Counts& counts) {
  if (counts.kept == 0) throw std::domain_error("run_protocol: no trials survived post-selection");
  SimReport rep;
  rep.trials = trials;
  rep.kept = counts.kept;
  rep.bell_fail_count = counts.bell_fail;
  rep.alice_zero_count = counts.alice_zero;
  rep.pair_counts = counts.pair_counts;

  const double kept = static_cast<double>(counts.kept);
  auto indicator_se = [kept](double phat) {
    if (kept < 2.0) return 0.0;
    return std::sqrt(phat * (1.0 - phat) / (kept - 1.0));
  };

  rep.bell_value = static_cast<double>(counts.bell_fail) / kept;
  rep.bell_se = indicator_se(rep.bell_value);
  const double pzero = static_cast<double>(counts.alice_zero) / kept;
  rep.alice_bias = pzero - 0.5;
  rep.alice_bias_se = indicator_se(pzero);

  std::uint64_t min_count = counts.pair_counts[0];
  for (std::uint64_t c : counts.pair_counts) min_count = std::min(min_count, c);
  rep.min_pair_prob = static_cast<double>(min_count) / kept;
  return rep;
}

}  // namespace

SimReport run_protocol(int r, const Epsilon& sv, const AdversaryStrategy& strategy,
                       std::uint64_t trials, std::uint64_t master_seed, int threads) {
  TrialContext ctx = make_context(r, sv, strategy);
  if (trials == 0) throw std::invalid_argument("run_protocol: trials must be > 0");
  const std::size_t pairs = static_cast<std::size_t>(ctx.sc.pair_count());
  Counts total;
  total.pair_counts.assign(pairs, 0);
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nthreads)
  {
    Counts local;
    local.pair_counts.assign(pairs, 0);
#pragma omp for schedule(static) nowait
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
      run_one_trial(ctx, master_seed, static_cast<std::uint64_t>(t), local);
    }
#pragma omp critical
    {
      total.kept += local.kept;
      total.bell_fail += local.bell_fail;
      total.alice_zero += local.alice_zero;
      for (std::size_t i = 0; i < pairs; ++i) total.pair_counts[i] += local.pair_counts[i];
    }
  }
  return report_from_counts(trials, total);
}

SimReport run_protocol_serial(int r, const Epsilon& sv, const AdversaryStrategy& strategy,
                              std::uint64_t trials, std::uint64_t master_seed) {
  TrialContext ctx = make_context(r, sv, strategy);
  if (trials == 0) throw std::invalid_argument("run_protocol: trials must be > 0");
  Counts counts;
  counts.pair_counts.assign(static_cast<std::size_t>(ctx.sc.pair_count()), 0);
  for (std::uint64_t t = 0; t < trials; ++t) run_one_trial(ctx, master_seed, t, counts);
  return report_from_counts(trials, counts);
}

std::vector<SimReport> sweep_strategies(int r, const Epsilon& sv,
                                        const std::vector<AdversaryStrategy>& strategies,
                                        std::uint64_t trials, std::uint64_t master_seed,
                                        int threads) {
  std::vector<SimReport> out;
  out.reserve(strategies.size());
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    out.push_back(run_protocol(r, sv, strategies[i], trials, derive_seed(master_seed, i), threads));
  }
  return out;
}

}  // namespace chainamp
