#pragma once

#include <cstdint>
#include <utility>
#include <vector>

// Chained Bell inequality with N settings per side.  The functional sums the
// anti-correlation probabilities over the 2N neighbouring setting pairs,
// except that the wrap-around pair (x=0, y=N-1) contributes its correlation
// probability.  Local hidden variables force a value >= 1; the optimal
// quantum box reaches 2N sin^2(pi/4N).

namespace chainamp {

struct ChainScenario {
  int N;

  explicit ChainScenario(int N_);

  // Measurement directions on the Bloch circle.
  double alice_angle(int x) const;
  double bob_angle(int y) const;

  int pair_count() const { return 2 * N; }

  // Canonical pair order walks the chain: (0,0), (1,0), (1,1), (2,1), ...,
  // (N-1,N-1), and the wrap pair (0,N-1) last.
  std::pair<int, int> chain_pair(int idx) const;
  // Index in the canonical order, or -1 when (x, y) is off the chain.
  int chain_pair_index(int x, int y) const;
  bool is_wrap_pair(int x, int y) const { return x == 0 && y == N - 1; }
};

// Conditional distribution P(a, b | x, y) with binary outcomes, stored as a
// flat [x][y][a][b] table.
struct Box {
  int N = 0;
  std::vector<double> table;

  Box() = default;
  explicit Box(int N_);

  double p(int a, int b, int x, int y) const { return table[index(a, b, x, y)]; }
  double& at(int a, int b, int x, int y) { return table[index(a, b, x, y)]; }
  double marginal_a(int a, int x, int y) const { return p(a, 0, x, y) + p(a, 1, x, y); }
  double marginal_b(int b, int x, int y) const { return p(0, b, x, y) + p(1, b, x, y); }

  // Throws unless every (x, y) slice is a distribution (tol 1e-12) and the
  // box is no-signaling (tol 1e-9).
  void validate() const;

  std::size_t index(int a, int b, int x, int y) const {
    return ((static_cast<std::size_t>(x) * N + y) * 2 + a) * 2 + b;
  }
};

// Maximally entangled pair measured along the scenario angles, correlated
// convention: P(a XOR b = 1 | x, y) = sin^2((theta_A - theta_B)/2), outcomes
// unbiased.
Box quantum_box(int N);

// No-signaling box saturating the chain: perfect correlation on every chain
// pair except perfect anti-correlation on the wrap pair.
Box chain_pr_box(int N);

// Deterministic local box a = f_A(x), b = f_B(y).
Box deterministic_box(const std::vector<int>& f_a, const std::vector<int>& f_b);

// Correlation box with a XOR b = s(x, y) deterministically, outcomes unbiased.
Box correlation_box(int N, const std::vector<int>& s);

Box mix_boxes(const std::vector<std::pair<double, Box>>& terms);

bool check_no_signaling(const Box& box, double tol);

// Largest deviation of an output marginal from 1/2.
double box_output_bias(const Box& box);

// Distribution over the 2N chain pairs in canonical order.
struct SettingsDistribution {
  int N = 0;
  std::vector<double> probs;

  static SettingsDistribution uniform(int N);
  void validate(double tol) const;
};

// Unweighted chain functional (uniform weights would divide this by 2N).
double bell_value_raw(const Box& box);

// Chain functional weighted by a settings distribution.
double bell_value_weighted(const Box& box, const SettingsDistribution& sd);

// Minimum of the raw functional over deterministic local strategies.
double lhv_minimum(int N, int threads = 0);
double lhv_minimum_serial(int N);

// Minimum of the weighted functional over deterministic local strategies.
double weighted_lhv_minimum(int N, const SettingsDistribution& sd, int threads = 0);
double weighted_lhv_minimum_serial(int N, const SettingsDistribution& sd);

}  // namespace chainamp
