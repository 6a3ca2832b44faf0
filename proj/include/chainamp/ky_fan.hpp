#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "chainamp/epsilon.hpp"
#include "chainamp/prob_dist.hpp"

// Ky Fan norms of probability vectors: the norm of order k is the sum of the
// k largest entries.  For the Bernoulli source on 2r bits the relevant order
// is k = 2^{r+1} - 1, and the sum can be walked layer by layer (entries with
// the same popcount are equal), exactly or in the log domain.

namespace chainamp {

// A positive real carried as its base-2 logarithm.
struct LogReal {
  double log2_value = 0.0;
  double to_linear() const;
};

// log2(2^a + 2^b), safe against -inf.
double log2_add(double a, double b);

enum class KyFanMode { bruteforce, closed, layer, lower_bound, upper_bound };

std::string to_string(KyFanMode mode);
KyFanMode ky_fan_mode_from_string(const std::string& s);

struct KyFanResult {
  std::uint64_t k = 0;
  double value = 0.0;
  LogReal log2_value;
  KyFanMode mode = KyFanMode::closed;
};

// Sort-and-sum oracle for any distribution, 1 <= k <= 2^n.
double ky_fan_bruteforce(const ProbDist& dist, std::uint64_t k);

// Norm of order 2^{r+1} - 1 of Bernoulli(2r, eps): full layers while the
// cumulative count stays within k, then the partial layer.
KyFanResult ky_fan_bernoulli_exact(int r, const Epsilon& sv);

// Whole-layer overshoot: all layers up to the count cutoff m, no partial cut.
KyFanResult ky_fan_bernoulli_layer(int r, const Epsilon& sv);

// Same sum as ky_fan_bernoulli_exact, evaluated in the log domain; usable far
// beyond the range where the linear value underflows.
LogReal ky_fan_bernoulli_log(int r, const Epsilon& sv);

// Exact rational evaluation for small r.
mpq_class ky_fan_bernoulli_exact_rational(int r, const mpq_class& eps);

// Smallest m with sum_{i<=m} C(2r, i) >= 2^{r+1} - 1, and m/r.
struct LayerCutoff {
  unsigned m = 0;
  double c_finite = 0.0;
};
LayerCutoff layer_cutoff(int r);

// Shannon entropy of a bit, H(x) = -x log2 x - (1-x) log2 (1-x).
double binary_entropy(double x);

// Root of H(c/2) = 1/2 on (0, 1), by bisection to within tol.
double solve_c_asymptotic(double tol);

// Geometric-tail factor (2 - c)(1 - 2 eps) / (2 (1 - c - 2 eps)); finite for
// eps < (1 - c)/2, required eps < 0.39.
double lemma2_bound_factor(const Epsilon& sv);

// Single-layer sandwich around the norm: lower is the log2 of the layer-cr
// term C(2r, cr) p_-^{cr} p_+^{(2-c)r} with cr = floor(c r); upper adds the
// log of the tail factor.
struct Lemma2Bounds {
  LogReal lower;
  LogReal upper;
};
Lemma2Bounds lemma2_bounds(int r, const Epsilon& sv);

// log2 C(n, k) via lgamma.
LogReal log_binomial(unsigned long n, unsigned long k);

}  // namespace chainamp
