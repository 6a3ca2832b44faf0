#include "chainamp/ky_fan.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "chainamp/rational.hpp"

namespace chainamp {

double LogReal::to_linear() const { return std::exp2(log2_value); }

double log2_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  double m = std::max(a, b);
  return m + std::log2(std::exp2(a - m) + std::exp2(b - m));
}

std::string to_string(KyFanMode mode) {
  switch (mode) {
    case KyFanMode::bruteforce: return "bruteforce";
    case KyFanMode::closed: return "closed";
    case KyFanMode::layer: return "layer";
    case KyFanMode::lower_bound: return "lower_bound";
    case KyFanMode::upper_bound: return "upper_bound";
  }
  throw std::invalid_argument("KyFanMode: bad value");
}

KyFanMode ky_fan_mode_from_string(const std::string& s) {
  if (s == "bruteforce") return KyFanMode::bruteforce;
  if (s == "closed") return KyFanMode::closed;
  if (s == "layer") return KyFanMode::layer;
  if (s == "lower_bound") return KyFanMode::lower_bound;
  if (s == "upper_bound") return KyFanMode::upper_bound;
  throw std::invalid_argument("unknown Ky Fan mode: " + s);
}

double ky_fan_bruteforce(const ProbDist& dist, std::uint64_t k) {
  if (k < 1 || k > dist.size()) throw std::invalid_argument("ky_fan_bruteforce: k out of range");
  std::vector<double> sorted = dist.probs;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  long double sum = 0.0L;
  for (std::uint64_t i = 0; i < k; ++i) sum += sorted[i];
  return static_cast<double>(sum);
}

namespace {

void check_r_linear(int r) {
  if (r < 1) throw std::invalid_argument("ky_fan: r must be >= 1");
  if (r > 62) throw std::invalid_argument("ky_fan: order 2^{r+1}-1 overflows, use the log form");
}

}  // namespace

KyFanResult ky_fan_bernoulli_exact(int r, const Epsilon& sv) {
  check_r_linear(r);
  const unsigned long n = 2ul * static_cast<unsigned long>(r);
  const mpz_class k = (mpz_class(1) << (r + 1)) - 1;
  std::vector<double> pp(n + 1, 1.0), pm(n + 1, 1.0);
  for (unsigned long i = 1; i <= n; ++i) {
    pp[i] = pp[i - 1] * sv.p_plus();
    pm[i] = pm[i - 1] * sv.p_minus();
  }
  double value = 0.0;
  mpz_class cum = 0;
  for (unsigned long i = 0; i <= n; ++i) {
    mpz_class cnt = exact_binomial(n, i);
    double term = pp[n - i] * pm[i];
    if (cum + cnt <= k) {
      value += cnt.get_d() * term;
      cum += cnt;
      if (cum == k) break;
    } else {
      mpz_class rem = k - cum;
      value += rem.get_d() * term;
      break;
    }
  }
  return KyFanResult{k.get_ui(), value, LogReal{std::log2(value)}, KyFanMode::closed};
}

KyFanResult ky_fan_bernoulli_layer(int r, const Epsilon& sv) {
  check_r_linear(r);
  const unsigned long n = 2ul * static_cast<unsigned long>(r);
  const unsigned m = layer_cutoff(r).m;
  std::vector<double> pp(n + 1, 1.0), pm(n + 1, 1.0);
  for (unsigned long i = 1; i <= n; ++i) {
    pp[i] = pp[i - 1] * sv.p_plus();
    pm[i] = pm[i - 1] * sv.p_minus();
  }
  double value = 0.0;
  for (unsigned long i = 0; i <= m; ++i) {
    value += exact_binomial(n, i).get_d() * pp[n - i] * pm[i];
  }
  const mpz_class k = (mpz_class(1) << (r + 1)) - 1;
  return KyFanResult{k.get_ui(), value, LogReal{std::log2(value)}, KyFanMode::layer};
}

LogReal ky_fan_bernoulli_log(int r, const Epsilon& sv) {
  if (r < 1) throw std::invalid_argument("ky_fan: r must be >= 1");
  const unsigned long n = 2ul * static_cast<unsigned long>(r);
  const mpz_class k = (mpz_class(1) << (r + 1)) - 1;
  const double lpp = std::log2(sv.p_plus());
  const double lpm = std::log2(sv.p_minus());
  double acc = -std::numeric_limits<double>::infinity();
  mpz_class cum = 0;
  for (unsigned long i = 0; i <= n; ++i) {
    mpz_class cnt = exact_binomial(n, i);
    double lterm = static_cast<double>(n - i) * lpp + static_cast<double>(i) * lpm;
    if (cum + cnt <= k) {
      acc = log2_add(acc, log2_mpz(cnt) + lterm);
      cum += cnt;
      if (cum == k) break;
    } else {
      mpz_class rem = k - cum;
      acc = log2_add(acc, log2_mpz(rem) + lterm);
      break;
    }
  }
  return LogReal{acc};
}

mpq_class ky_fan_bernoulli_exact_rational(int r, const mpq_class& eps) {
  if (r < 1 || r > 62) throw std::invalid_argument("ky_fan rational: r out of range");
  if (eps < 0 || eps >= mpq_class(1, 2)) throw std::invalid_argument("ky_fan rational: bad eps");
  const unsigned long n = 2ul * static_cast<unsigned long>(r);
  const mpz_class k = (mpz_class(1) << (r + 1)) - 1;
  mpq_class pp = mpq_class(1, 2) + eps;
  mpq_class pm = mpq_class(1, 2) - eps;
  std::vector<mpq_class> ppw(n + 1, 1), pmw(n + 1, 1);
  for (unsigned long i = 1; i <= n; ++i) {
    ppw[i] = ppw[i - 1] * pp;
    pmw[i] = pmw[i - 1] * pm;
  }
  mpq_class value = 0;
  mpz_class cum = 0;
  for (unsigned long i = 0; i <= n; ++i) {
    mpz_class cnt = exact_binomial(n, i);
    mpq_class term = ppw[n - i] * pmw[i];
    if (cum + cnt <= k) {
      value += mpq_class(cnt) * term;
      cum += cnt;
      if (cum == k) break;
    } else {
      value += mpq_class(k - cum) * term;
      break;
    }
  }
  return value;
}

LayerCutoff layer_cutoff(int r) {
  if (r < 1) throw std::invalid_argument("layer_cutoff: r must be >= 1");
  const unsigned long n = 2ul * static_cast<unsigned long>(r);
  const mpz_class k = (mpz_class(1) << (r + 1)) - 1;
  mpz_class cum = 0;
  for (unsigned long m = 0; m <= n; ++m) {
    cum += exact_binomial(n, m);
    if (cum >= k) return LayerCutoff{static_cast<unsigned>(m), static_cast<double>(m) / r};
  }
  throw std::logic_error("layer_cutoff: cutoff not reached");
}

double binary_entropy(double x) {
  if (!(x >= 0.0) || !(x <= 1.0)) throw std::invalid_argument("binary_entropy: x outside [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double solve_c_asymptotic(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_c_asymptotic: tol must be positive");
  // H(c/2) is strictly increasing on (0, 1), so the root is unique.
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (binary_entropy(0.5 * mid) < 0.5) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

double cached_c() {
  static const double c = solve_c_asymptotic(1e-14);
  return c;
}

}  // namespace

double lemma2_bound_factor(const Epsilon& sv) {
  if (!(sv.eps < 0.39)) throw std::invalid_argument("lemma2_bound_factor: needs eps < 0.39");
  const double c = cached_c();
  return (2.0 - c) * (1.0 - 2.0 * sv.eps) / (2.0 * (1.0 - c - 2.0 * sv.eps));
}

Lemma2Bounds lemma2_bounds(int r, const Epsilon& sv) {
  if (r < 1) throw std::invalid_argument("lemma2_bounds: r must be >= 1");
  if (!(sv.eps < 0.39)) throw std::invalid_argument("lemma2_bounds: needs eps < 0.39");
  const double c = cached_c();
  const unsigned long cr = static_cast<unsigned long>(c * r);
  const double lower = log_binomial(2ul * r, cr).log2_value +
                       static_cast<double>(cr) * std::log2(sv.p_minus()) +
                       (2.0 - c) * r * std::log2(sv.p_plus());
  const double upper = lower + std::log2(lemma2_bound_factor(sv));
  return Lemma2Bounds{LogReal{lower}, LogReal{upper}};
}

LogReal log_binomial(unsigned long n, unsigned long k) {
  if (k > n) throw std::invalid_argument("log_binomial: k > n");
  const double ln2 = std::log(2.0);
  double v = (std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
              std::lgamma(static_cast<double>(n - k) + 1.0)) /
             ln2;
  return LogReal{v};
}

}  // namespace chainamp
