#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "chainamp/chain_bell.hpp"
#include "chainamp/epsilon.hpp"
#include "chainamp/ky_fan.hpp"
#include "chainamp/prob_dist.hpp"
#include "chainamp/sv_source.hpp"

// End-to-end amplification bounds for the chained Bell protocol with
// N = 2^r settings, where the 2r setting bits come from an SV source with
// bias eps.  An observed Bell value beta constrains the adversary's
// distance-from-uniform delta, which maps to the bias of the output bit.

namespace chainamp {

// Smallest probability, over extremal SV sources, that the post-selected
// settings assign to the worst chain pair: p_-^{2r} / (p_-^{2r} + ||B||_k)
// with ||B||_k the Ky Fan norm of order k = 2^{r+1} - 1 of Bernoulli(2r).
LogReal p_min_log2(int r, const Epsilon& sv);
mpq_class p_min_rational(int r, const mpq_class& eps);

// Quantum value per chain pair, sin^2(pi / 2^{r+2}).
double beta_q(int r);
double beta_q_log2(int r);

// Bound on the adversary's trace distance from uniform given the quantum
// Bell value: min(1, beta_q / p_min), and the coarse variant that replaces
// p_min by p_-^{2r} / (2N p_+^{2r}).
double delta_bound(int r, const Epsilon& sv);
double delta_bound_log2(int r, const Epsilon& sv);  // unclamped
double delta_bound_coarse(int r, const Epsilon& sv);
double delta_bound_coarse_log2(int r, const Epsilon& sv);  // unclamped

// delta / (2 p) for a general observed value: min(1, eta_q / eta_sv).
double general_delta(double eta_q, double eta_sv);

// Bias of the protocol output bit, eps_new = delta_bound / 2, and the
// analytic lower-bound proxy with the layer count replaced by
// (2^{r+1} - 1) p_-^{0.22 r} p_+^{1.78 r}.
double eps_new(int r, const Epsilon& sv);
double eps_new_lower_bound(int r, const Epsilon& sv);
double eps_new_lower_bound_log2(int r, const Epsilon& sv);

// Amplification thresholds on eps: closed form (sqrt(2) - 1)^2 / 2 from the
// N = 2 analysis, and the asymptotic (2^{1/(2-c)} - 1) / (2 (2^{1/(2-c)} + 1)).
double threshold_simple();
double threshold_simple_root(double tol);
double threshold_asymptotic();

// Post-selected distribution over the 2N chain pairs induced by a 2r-bit
// source: x from the first r bits, y from the last r.
SettingsDistribution settings_distribution_from_sv(const ProbDist& dist, int r);

struct ProtocolReport {
  int r = 0;
  double eps = 0.0;
  std::uint64_t n_settings = 0;
  double log2_kyfan = 0.0;
  double log2_pmin = 0.0;
  double beta_q = 0.0;
  double delta = 0.0;
  double delta_coarse = 0.0;
  double eps_new = 0.0;
  double eps_new_lower = 0.0;
  double threshold_simple = 0.0;
  double threshold_asymptotic = 0.0;

  bool operator==(const ProtocolReport&) const = default;
};

ProtocolReport protocol_report(int r, const Epsilon& sv);
std::vector<ProtocolReport> protocol_curve(const Epsilon& sv, int r_min, int r_max, int threads = 0);

}  // namespace chainamp
