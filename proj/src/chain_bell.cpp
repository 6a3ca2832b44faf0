#include "chainamp/chain_bell.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace chainamp {

ChainScenario::ChainScenario(int N_) : N(N_) {
  if (N < 2) throw std::invalid_argument("ChainScenario: N must be >= 2");
}

double ChainScenario::alice_angle(int x) const { return std::numbers::pi * x / N; }

double ChainScenario::bob_angle(int y) const { return std::numbers::pi * (y + 0.5) / N; }

std::pair<int, int> ChainScenario::chain_pair(int idx) const {
  if (idx < 0 || idx >= 2 * N) throw std::out_of_range("chain_pair: bad index");
  if (idx == 2 * N - 1) return {0, N - 1};
  int j = idx / 2;
  return (idx % 2 == 0) ? std::pair<int, int>{j, j} : std::pair<int, int>{j + 1, j};
}

int ChainScenario::chain_pair_index(int x, int y) const {
  if (x < 0 || x >= N || y < 0 || y >= N) throw std::out_of_range("chain_pair_index: bad setting");
  if (x == y) return 2 * x;
  if (x == (y + 1) % N) return y == N - 1 ? 2 * N - 1 : 2 * y + 1;
  return -1;
}

Box::Box(int N_) : N(N_), table(static_cast<std::size_t>(N_) * N_ * 4, 0.0) {
  if (N_ < 2) throw std::invalid_argument("Box: N must be >= 2");
}

void Box::validate() const {
  if (N < 2 || table.size() != static_cast<std::size_t>(N) * N * 4) {
    throw std::invalid_argument("Box: malformed table");
  }
  for (int x = 0; x < N; ++x) {
    for (int y = 0; y < N; ++y) {
      double sum = 0.0;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          double v = p(a, b, x, y);
          if (v < 0.0) throw std::invalid_argument("Box: negative entry");
          sum += v;
        }
      }
      if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("Box: slice does not sum to 1");
    }
  }
  if (!check_no_signaling(*this, 1e-9)) throw std::invalid_argument("Box: signaling");
}

Box quantum_box(int N) {
  ChainScenario sc(N);
  Box box(N);
  for (int x = 0; x < N; ++x) {
    for (int y = 0; y < N; ++y) {
      double half = 0.5 * (sc.alice_angle(x) - sc.bob_angle(y));
      double q = std::sin(half) * std::sin(half);  // P(a XOR b = 1)
      box.at(0, 1, x, y) = box.at(1, 0, x, y) = 0.5 * q;
      box.at(0, 0, x, y) = box.at(1, 1, x, y) = 0.5 * (1.0 - q);
    }
  }
  return box;
}

Box correlation_box(int N, const std::vector<int>& s) {
  if (s.size() != static_cast<std::size_t>(N) * N) {
    throw std::invalid_argument("correlation_box: s needs N^2 entries");
  }
  Box box(N);
  for (int x = 0; x < N; ++x) {
    for (int y = 0; y < N; ++y) {
      int xr = s[static_cast<std::size_t>(x) * N + y] & 1;
      box.at(0, xr, x, y) = 0.5;
      box.at(1, 1 - xr, x, y) = 0.5;
    }
  }
  return box;
}

Box chain_pr_box(int N) {
  ChainScenario sc(N);
  std::vector<int> s(static_cast<std::size_t>(N) * N, 0);
  for (int x = 0; x < N; ++x) {
    for (int y = 0; y < N; ++y) {
      int idx = sc.chain_pair_index(x, y);
      // a XOR b = 1 on the wrap pair, 0 elsewhere on the chain; off-chain
      // pairs may take either value, fixed here by the x < y convention.
      if (idx >= 0) {
        s[static_cast<std::size_t>(x) * N + y] = sc.is_wrap_pair(x, y) ? 1 : 0;
      } else {
        s[static_cast<std::size_t>(x) * N + y] = x < y ? 1 : 0;
      }
    }
  }
  return correlation_box(N, s);
}

Box deterministic_box(const std::vector<int>& f_a, const std::vector<int>& f_b) {
  if (f_a.size() != f_b.size() || f_a.empty()) {
    throw std::invalid_argument("deterministic_box: responder tables must have equal size N");
  }
  int N = static_cast<int>(f_a.size());
  Box box(N);
  for (int x = 0; x < N; ++x) {
    for (int y = 0; y < N; ++y) {
      box.at(f_a[x] & 1, f_b[y] & 1, x, y) = 1.0;
    }
  }
  return box;
}

Box mix_boxes(const std::vector<std::pair<double, Box>>& terms) {
  if (terms.empty()) throw std::invalid_argument("mix_boxes: empty mixture");
  int N = terms.front().second.N;
  double wsum = 0.0;
  for (const auto& [w, box] : terms) {
    if (w < 0.0) throw std::invalid_argument("mix_boxes: negative weight");
    if (box.N != N) throw std::invalid_argument("mix_boxes: mismatched N");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12) throw std::invalid_argument("mix_boxes: weights must sum to 1");
  Box out(N);
  for (std::size_t i = 0; i < out.table.size(); ++i) {
    double v = 0.0;
    for (const auto& [w, box] : terms) v += w * box.table[i];
    out.table[i] = v;
  }
  return out;
}

bool check_no_signaling(const Box& box, double tol) {
  for (int x = 0; x < box.N; ++x) {
    double ref = box.marginal_a(0, x, 0);
    for (int y = 1; y < box.N; ++y) {
      if (std::abs(box.marginal_a(0, x, y) - ref) > tol) return false;
    }
  }
  for (int y = 0; y < box.N; ++y) {
    double ref = box.marginal_b(0, 0, y);
    for (int x = 1; x < box.N; ++x) {
      if (std::abs(box.marginal_b(0, x, y) - ref) > tol) return false;
    }
  }
  return true;
}

double box_output_bias(const Box& box) {
  double worst = 0.0;
  for (int x = 0; x < box.N; ++x) {
    for (int y = 0; y < box.N; ++y) {
      worst = std::max(worst, std::abs(box.marginal_a(0, x, y) - 0.5));
      worst = std::max(worst, std::abs(box.marginal_b(0, x, y) - 0.5));
    }
  }
  return worst;
}

SettingsDistribution SettingsDistribution::uniform(int N) {
  ChainScenario sc(N);
  return SettingsDistribution{N, std::vector<double>(sc.pair_count(), 0.5 / N)};
}

void SettingsDistribution::validate(double tol) const {
  if (N < 2 || probs.size() != static_cast<std::size_t>(2) * N) {
    throw std::invalid_argument("SettingsDistribution: needs 2N entries");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw std::invalid_argument("SettingsDistribution: negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw std::invalid_argument("SettingsDistribution: entries do not sum to 1");
  }
}

namespace {

double pair_term(const Box& box, const ChainScenario& sc, int idx) {
  auto [x, y] = sc.chain_pair(idx);
  int fail = sc.is_wrap_pair(x, y) ? 0 : 1;  // a XOR b value counted as failure
  return box.p(0, fail, x, y) + box.p(1, 1 - fail, x, y);
}

}  // namespace

double bell_value_raw(const Box& box) {
  ChainScenario sc(box.N);
  double sum = 0.0;
  for (int idx = 0; idx < sc.pair_count(); ++idx) sum += pair_term(box, sc, idx);
  return sum;
}

double bell_value_weighted(const Box& box, const SettingsDistribution& sd) {
  if (sd.N != box.N) throw std::invalid_argument("bell_value_weighted: mismatched N");
  ChainScenario sc(box.N);
  double sum = 0.0;
  for (int idx = 0; idx < sc.pair_count(); ++idx) sum += sd.probs[idx] * pair_term(box, sc, idx);
  return sum;
}

namespace {

// Raw/weighted chain value of the deterministic strategy (maskA, maskB),
// reading assignments off the bit masks.
double det_value(const ChainScenario& sc, const SettingsDistribution* sd, std::uint32_t mask_a,
                 std::uint32_t mask_b) {
  double sum = 0.0;
  for (int idx = 0; idx < sc.pair_count(); ++idx) {
    auto [x, y] = sc.chain_pair(idx);
    int a = (mask_a >> x) & 1;
    int b = (mask_b >> y) & 1;
    int fail = sc.is_wrap_pair(x, y) ? ((a ^ b) == 0) : ((a ^ b) == 1);
    if (fail) sum += sd ? sd->probs[idx] : 1.0;
  }
  return sum;
}

double lhv_scan(int N, const SettingsDistribution* sd, int threads) {
  if (N < 2) throw std::invalid_argument("lhv_minimum: N must be at least 2");
  if (N > 8) throw std::invalid_argument("lhv_minimum: N too large for enumeration");
  if (sd) sd->validate(1e-9);
  ChainScenario sc(N);
  const std::uint32_t lim = std::uint32_t{1} << N;
  double best = std::numeric_limits<double>::infinity();
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for reduction(min : best) schedule(static) num_threads(nthreads)
  for (std::uint32_t mask_a = 0; mask_a < lim; ++mask_a) {
    for (std::uint32_t mask_b = 0; mask_b < lim; ++mask_b) {
      best = std::min(best, det_value(sc, sd, mask_a, mask_b));
    }
  }
  return best;
}

double lhv_scan_serial(int N, const SettingsDistribution* sd) {
  if (N < 2) throw std::invalid_argument("lhv_minimum: N must be at least 2");
  if (N > 8) throw std::invalid_argument("lhv_minimum: N too large for enumeration");
  if (sd) sd->validate(1e-9);
  ChainScenario sc(N);
  const std::uint32_t lim = std::uint32_t{1} << N;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask_a = 0; mask_a < lim; ++mask_a) {
    for (std::uint32_t mask_b = 0; mask_b < lim; ++mask_b) {
      best = std::min(best, det_value(sc, sd, mask_a, mask_b));
    }
  }
  return best;
}

}  // namespace

double lhv_minimum(int N, int threads) { return lhv_scan(N, nullptr, threads); }

double lhv_minimum_serial(int N) { return lhv_scan_serial(N, nullptr); }

double weighted_lhv_minimum(int N, const SettingsDistribution& sd, int threads) {
  if (sd.N != N) throw std::invalid_argument("weighted_lhv_minimum: mismatched N");
  return lhv_scan(N, &sd, threads);
}

double weighted_lhv_minimum_serial(int N, const SettingsDistribution& sd) {
  if (sd.N != N) throw std::invalid_argument("weighted_lhv_minimum: mismatched N");
  return lhv_scan_serial(N, &sd);
}

}  // namespace chainamp
