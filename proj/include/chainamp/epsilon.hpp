#pragma once

#include <stdexcept>

namespace chainamp {

// Bias of a Santha-Vazirani source: every conditional bit probability lies in
// [1/2 - eps, 1/2 + eps].  Works with double or an exact rational scalar.
template <typename T>
struct SvParams {
  T eps{};

  explicit SvParams(const T& e) : eps(e) {
    if (!(eps >= T(0)) || !(eps < T(0.5))) {
      throw std::invalid_argument("SvParams: eps must lie in [0, 1/2)");
    }
  }

  T p_plus() const { return T(0.5) + eps; }
  T p_minus() const { return T(0.5) - eps; }
};

using Epsilon = SvParams<double>;

}  // namespace chainamp
