#include "chainamp/sv_source.hpp"

namespace chainamp {

ExtremalLabeling sample_extremal(const ProbDist& dist, const Epsilon& sv, std::uint64_t seed) {
  auto alpha = mixing_coordinates(dist, sv);
  TrialRng rng(seed, 0);
  std::vector<Sign> signs(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    signs[i] = rng.next_unit() < alpha[i] ? Sign::plus : Sign::minus;
  }
  return ExtremalLabeling(dist.n, std::move(signs));
}

BitString sample_bits(const ExtremalLabeling& lab, const Epsilon& sv, TrialRng& rng) {
  std::uint64_t value = 0;
  std::size_t node = 0;
  for (int i = 0; i < lab.n; ++i) {
    double p0 = lab.at(node) == Sign::plus ? sv.p_plus() : sv.p_minus();
    std::uint64_t bit = rng.next_unit() < p0 ? 0 : 1;
    value = (value << 1) | bit;
    node = 2 * node + 1 + bit;
  }
  return BitString{lab.n, value};
}

BitString sample_bits(const ExtremalLabeling& lab, const Epsilon& sv, std::uint64_t seed) {
  TrialRng rng(seed, 0);
  return sample_bits(lab, sv, rng);
}

}  // namespace chainamp
