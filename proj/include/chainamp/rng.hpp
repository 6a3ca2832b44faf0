#pragma once

#include <cstdint>

namespace chainamp {

// Finalizer from splitmix64, see http://prng.di.unimi.it/splitmix64.c
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Counter-based stream: the state depends only on (seed, counter), so the
// draws of trial i are the same no matter which thread executes it.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t counter)
      : state_(mix64(seed + kGolden * (counter + 1))) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Stable per-cell seed for parameter sweeps.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(index + kGolden));
}

}  // namespace chainamp
