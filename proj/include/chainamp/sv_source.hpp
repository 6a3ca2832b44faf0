#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chainamp/epsilon.hpp"
#include "chainamp/prob_dist.hpp"
#include "chainamp/rng.hpp"

// Santha-Vazirani sources and their decomposition into extremal (permuted
// Bernoulli) distributions.  An extremal source fixes, for every prefix, the
// conditional P(next bit = 0) at either 1/2 + eps or 1/2 - eps; any SV source
// is a convex mixture of such choices.

namespace chainamp {

enum class Sign : std::uint8_t { plus = 0, minus = 1 };

// One sign per prefix, heap order: the prefix of length L with MSB-first
// value v sits at index 2^L - 1 + v.  '+' means P(0 | prefix) = 1/2 + eps.
struct ExtremalLabeling {
  int n = 0;
  std::vector<Sign> signs;

  ExtremalLabeling() = default;
  ExtremalLabeling(int n_, std::vector<Sign> s) : n(n_), signs(std::move(s)) {
    if (n < 1 || n > 30) throw std::invalid_argument("ExtremalLabeling: n out of range");
    if (signs.size() != (std::size_t{1} << n) - 1) {
      throw std::invalid_argument("ExtremalLabeling: needs 2^n - 1 signs");
    }
  }

  static ExtremalLabeling all_plus(int n) {
    return ExtremalLabeling(n, std::vector<Sign>((std::size_t{1} << n) - 1, Sign::plus));
  }

  Sign at(std::size_t node) const { return signs[node]; }

  std::string to_string() const {
    std::string s;
    s.reserve(signs.size());
    for (Sign g : signs) s.push_back(g == Sign::plus ? '+' : '-');
    return s;
  }

  static ExtremalLabeling from_string(int n, std::string_view s) {
    std::vector<Sign> signs;
    signs.reserve(s.size());
    for (char c : s) {
      if (c == '+') {
        signs.push_back(Sign::plus);
      } else if (c == '-') {
        signs.push_back(Sign::minus);
      } else {
        throw std::invalid_argument("ExtremalLabeling: signs must be '+' or '-'");
      }
    }
    return ExtremalLabeling(n, std::move(signs));
  }

  bool operator==(const ExtremalLabeling&) const = default;
};

template <typename T>
struct DecompositionTerm {
  T weight;
  ExtremalLabeling labeling;
};

template <typename T>
struct BasicConvexDecomposition {
  T eps;
  std::vector<DecompositionTerm<T>> terms;
};

using ConvexDecomposition = BasicConvexDecomposition<double>;

template <typename T>
struct SvReport {
  bool pass = true;
  int worst_prefix_len = 0;
  std::uint64_t worst_prefix_value = 0;
  T worst_conditional{};

  BitString worst_prefix() const {
    return BitString{worst_prefix_len, worst_prefix_value};
  }
};

namespace detail {

// Slack absorbing float roundoff in conditionals rebuilt from products; the
// exact rational path gets none.
template <typename T>
inline T sv_slack() {
  return T(0);
}
template <>
inline double sv_slack<double>() {
  return 1e-12;
}

inline int level_of(std::size_t node) {
  int l = 0;
  while ((std::size_t{2} << l) - 1 <= node) ++l;
  return l;
}

}  // namespace detail

// Bernoulli product source: each bit is 0 with probability 1/2 + eps.
template <typename T>
BasicProbDist<T> bernoulli_distribution(int n, const SvParams<T>& sv) {
  if (n < 1 || n > 30) throw std::invalid_argument("bernoulli_distribution: n out of range");
  std::vector<T> pp(n + 1, T(1)), pm(n + 1, T(1));
  for (int i = 1; i <= n; ++i) {
    pp[i] = pp[i - 1] * sv.p_plus();
    pm[i] = pm[i - 1] * sv.p_minus();
  }
  std::vector<T> probs(std::size_t{1} << n);
  for (std::size_t v = 0; v < probs.size(); ++v) {
    int ones = std::popcount(v);
    probs[v] = pp[n - ones] * pm[ones];
  }
  return BasicProbDist<T>(n, std::move(probs));
}

// Checks every conditional P(0 | prefix) against [1/2 - eps, 1/2 + eps].
// Zero-probability prefixes are unconstrained.  Reports the prefix whose
// conditional sticks out the most (or comes closest when all pass).
template <typename T>
SvReport<T> verify_sv(const BasicProbDist<T>& dist, const SvParams<T>& sv, const T& tol) {
  auto mass = dist.prefix_masses();
  std::size_t internal = (std::size_t{1} << dist.n) - 1;
  SvReport<T> rep;
  rep.worst_conditional = T(0.5);
  bool have = false;
  T worst_excess(0);
  for (std::size_t node = 0; node < internal; ++node) {
    if (!(mass[node] > T(0))) continue;
    T cond = mass[2 * node + 1] / mass[node];
    T hi = cond - sv.p_plus();
    T lo = sv.p_minus() - cond;
    T excess = std::max(hi, lo);
    if (!have || excess > worst_excess) {
      have = true;
      worst_excess = excess;
      int len = detail::level_of(node);
      rep.worst_prefix_len = len;
      rep.worst_prefix_value = node - ((std::size_t{1} << len) - 1);
      rep.worst_conditional = cond;
    }
  }
  rep.pass = !(worst_excess > tol);
  return rep;
}

// Distribution of the extremal source given by a labeling: walk the prefix
// tree, multiplying the conditional picked by each sign.
template <typename T>
BasicProbDist<T> extremal_distribution(const ExtremalLabeling& lab, const SvParams<T>& sv) {
  int n = lab.n;
  std::vector<T> probs(std::size_t{1} << n, T(1));
  for (std::size_t v = 0; v < probs.size(); ++v) {
    std::size_t node = 0;
    T p(1);
    for (int i = n - 1; i >= 0; --i) {
      std::size_t bit = (v >> i) & 1;
      T p0 = lab.at(node) == Sign::plus ? sv.p_plus() : sv.p_minus();
      if (bit != 0) p0 = T(1) - p0;
      p *= p0;
      node = 2 * node + 1 + bit;
    }
    probs[v] = p;
  }
  return BasicProbDist<T>(n, std::move(probs));
}

// Per-prefix mixing coordinate: alpha = (P(0|prefix) - p_minus) / 2 eps,
// so the prefix conditional is alpha * p_plus + (1 - alpha) * p_minus.
// Prefixes with zero mass get alpha = 1 ('+' side).
template <typename T>
std::vector<T> mixing_coordinates(const BasicProbDist<T>& dist, const SvParams<T>& sv) {
  if (!(sv.eps > T(0))) {
    throw std::invalid_argument("mixing_coordinates: eps = 0 is degenerate");
  }
  auto rep = verify_sv(dist, sv, detail::sv_slack<T>());
  if (!rep.pass) throw std::invalid_argument("mixing_coordinates: distribution violates the SV bound");
  auto mass = dist.prefix_masses();
  std::size_t internal = (std::size_t{1} << dist.n) - 1;
  T width = sv.p_plus() - sv.p_minus();
  std::vector<T> alpha(internal, T(1));
  for (std::size_t node = 0; node < internal; ++node) {
    if (!(mass[node] > T(0))) continue;
    T a = (mass[2 * node + 1] / mass[node] - sv.p_minus()) / width;
    alpha[node] = std::clamp(a, T(0), T(1));
  }
  return alpha;
}

// Full enumeration of the product-form decomposition, n <= 4.  Term weights
// are products over prefixes of alpha ('+') or 1 - alpha ('-'); zero-weight
// labelings are dropped.
template <typename T>
BasicConvexDecomposition<T> decompose(const BasicProbDist<T>& dist, const SvParams<T>& sv) {
  if (dist.n > 4) {
    throw std::invalid_argument("decompose: full enumeration only for n <= 4, use sample_extremal");
  }
  auto alpha = mixing_coordinates(dist, sv);
  std::size_t internal = alpha.size();
  BasicConvexDecomposition<T> out{sv.eps, {}};
  for (std::uint32_t code = 0; code < (std::uint32_t{1} << internal); ++code) {
    T w(1);
    for (std::size_t i = 0; i < internal && w > T(0); ++i) {
      T f = alpha[i];
      if ((code >> i) & 1) f = T(1) - f;
      w *= f;
    }
    if (!(w > T(0))) continue;
    std::vector<Sign> signs(internal);
    for (std::size_t i = 0; i < internal; ++i) {
      signs[i] = ((code >> i) & 1) ? Sign::minus : Sign::plus;
    }
    out.terms.push_back({w, ExtremalLabeling(dist.n, std::move(signs))});
  }
  return out;
}

// Draws one extremal labeling: each prefix independently takes '+' with
// probability alpha(prefix).  Works for any n the distribution fits in.
ExtremalLabeling sample_extremal(const ProbDist& dist, const Epsilon& sv, std::uint64_t seed);

// Draws an n-bit string from an extremal source: bit = 0 with probability
// p_plus under '+', p_minus under '-'.
BitString sample_bits(const ExtremalLabeling& lab, const Epsilon& sv, TrialRng& rng);
BitString sample_bits(const ExtremalLabeling& lab, const Epsilon& sv, std::uint64_t seed);

// True when the sorted entries match the sorted Bernoulli(n, eps) entries
// within tol per entry.
template <typename T>
bool is_permutation_of_bernoulli(const BasicProbDist<T>& dist, const SvParams<T>& sv, const T& tol) {
  auto ref = bernoulli_distribution<T>(dist.n, sv);
  std::vector<T> a = dist.probs, b = ref.probs;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    T d = a[i] - b[i];
    if (d < T(0)) d = -d;
    if (d > tol) return false;
  }
  return true;
}

}  // namespace chainamp
