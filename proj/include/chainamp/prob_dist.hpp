#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace chainamp {

// Fixed-length bit string; bit 0 of the string is the most significant bit of
// the integer encoding, so "011" has value 3 at n = 3.
struct BitString {
  int n = 0;
  std::uint64_t value = 0;

  std::string to_string() const {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i) {
      if ((value >> (n - 1 - i)) & 1) s[static_cast<std::size_t>(i)] = '1';
    }
    return s;
  }
};

// Probability distribution over n-bit strings, indexed by the MSB-first
// encoding above.  T is double or mpq_class.
template <typename T>
struct BasicProbDist {
  int n = 0;
  std::vector<T> probs;

  BasicProbDist() = default;
  BasicProbDist(int n_, std::vector<T> p) : n(n_), probs(std::move(p)) {
    if (n < 1 || n > 30) throw std::invalid_argument("BasicProbDist: n out of range");
    if (probs.size() != (std::size_t{1} << n)) {
      throw std::invalid_argument("BasicProbDist: needs 2^n entries");
    }
  }

  static BasicProbDist uniform(int n) {
    BasicProbDist d(n, std::vector<T>(std::size_t{1} << n, T(1)));
    for (auto& p : d.probs) p /= static_cast<int>(std::size_t{1} << n);
    return d;
  }

  std::size_t size() const { return probs.size(); }

  // Throws unless entries are nonnegative and sum to 1 within tol.
  void validate(const T& tol) const {
    T sum(0);
    for (const T& p : probs) {
      if (p < T(0)) throw std::invalid_argument("BasicProbDist: negative entry");
      sum += p;
    }
    T err = sum - T(1);
    if (err < T(0)) err = -err;
    if (err > tol) throw std::invalid_argument("BasicProbDist: entries do not sum to 1");
  }

  // Masses of all prefixes in heap order: the prefix of length L with value v
  // sits at index 2^L - 1 + v; leaves (full strings) occupy the last 2^n slots.
  std::vector<T> prefix_masses() const {
    std::size_t leaves = probs.size();
    std::vector<T> mass(2 * leaves - 1, T(0));
    for (std::size_t v = 0; v < leaves; ++v) mass[leaves - 1 + v] = probs[v];
    for (std::size_t i = leaves - 1; i-- > 0;) mass[i] = mass[2 * i + 1] + mass[2 * i + 2];
    return mass;
  }
};

using ProbDist = BasicProbDist<double>;

}  // namespace chainamp
