#include "chainamp/amplify.hpp"

#include <omp.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "chainamp/rational.hpp"

namespace chainamp {

LogReal p_min_log2(int r, const Epsilon& sv) {
  if (r < 1) throw std::invalid_argument("p_min_log2: r must be >= 1");
  if (sv.eps == 0.0) return LogReal{-static_cast<double>(r + 1)};  // 1 / 2N exactly
  const double lp = 2.0 * r * std::log2(sv.p_minus());
  const double lb = ky_fan_bernoulli_log(r, sv).log2_value;
  return LogReal{lp - log2_add(lp, lb)};
}

mpq_class p_min_rational(int r, const mpq_class& eps) {
  if (r < 1 || r > 62) throw std::invalid_argument("p_min_rational: r out of range");
  if (eps < 0 || eps >= mpq_class(1, 2)) throw std::invalid_argument("p_min_rational: bad eps");
  mpq_class pm = mpq_class(1, 2) - eps;
  mpq_class pw = 1;
  for (int i = 0; i < 2 * r; ++i) pw *= pm;
  mpq_class norm = ky_fan_bernoulli_exact_rational(r, eps);
  return pw / (pw + norm);
}

double beta_q(int r) {
  if (r < 1) throw std::invalid_argument("beta_q: r must be >= 1");
  double s = std::sin(std::numbers::pi * std::exp2(-static_cast<double>(r + 2)));
  return s * s;
}

double beta_q_log2(int r) {
  if (r < 1) throw std::invalid_argument("beta_q_log2: r must be >= 1");
  return 2.0 * std::log2(std::sin(std::numbers::pi * std::exp2(-static_cast<double>(r + 2))));
}

double delta_bound_log2(int r, const Epsilon& sv) {
  return beta_q_log2(r) - p_min_log2(r, sv).log2_value;
}

double delta_bound(int r, const Epsilon& sv) {
  return std::min(1.0, std::exp2(delta_bound_log2(r, sv)));
}

double delta_bound_coarse_log2(int r, const Epsilon& sv) {
  if (sv.eps == 0.0) return beta_q_log2(r) + (r + 1);
  return beta_q_log2(r) + (r + 1) + 2.0 * r * (std::log2(sv.p_plus()) - std::log2(sv.p_minus()));
}

double delta_bound_coarse(int r, const Epsilon& sv) {
  return std::min(1.0, std::exp2(delta_bound_coarse_log2(r, sv)));
}

double general_delta(double eta_q, double eta_sv) {
  if (!(eta_q >= 0.0)) throw std::invalid_argument("general_delta: eta_q must be >= 0");
  if (!(eta_sv > 0.0)) throw std::invalid_argument("general_delta: eta_sv must be > 0");
  return std::min(1.0, eta_q / eta_sv);
}

double eps_new(int r, const Epsilon& sv) { return 0.5 * delta_bound(r, sv); }

double eps_new_lower_bound_log2(int r, const Epsilon& sv) {
  if (r < 1) throw std::invalid_argument("eps_new_lower_bound: r must be >= 1");
  // beta_q (p_-^{2r} + (2^{r+1} - 1) p_-^{0.22 r} p_+^{1.78 r}) / (2 p_-^{2r})
  const double lpm = std::log2(sv.p_minus());
  const double lpp = std::log2(sv.p_plus());
  const double lp = 2.0 * r * lpm;
  const double lcount = (r + 1) + std::log2(1.0 - std::exp2(-static_cast<double>(r + 1)));
  const double lproxy = lcount + 0.22 * r * lpm + 1.78 * r * lpp;
  return beta_q_log2(r) + log2_add(lp, lproxy) - lp - 1.0;
}

double eps_new_lower_bound(int r, const Epsilon& sv) {
  return std::exp2(eps_new_lower_bound_log2(r, sv));
}

double threshold_simple() {
  const double s = std::sqrt(2.0) - 1.0;
  return 0.5 * s * s;
}

double threshold_simple_root(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("threshold_simple_root: tol must be positive");
  // Root of (1/2 + e)^2 = 2 (1/2 - e)^2: the bias where the worst chain pair
  // stops being cheaper than the quantum value at N = 2.
  double lo = 0.0, hi = 0.5;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double lhs = (0.5 + mid) * (0.5 + mid);
    double rhs = 2.0 * (0.5 - mid) * (0.5 - mid);
    if (lhs < rhs) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double threshold_asymptotic() {
  const double c = solve_c_asymptotic(1e-14);
  const double t = std::exp2(1.0 / (2.0 - c));
  return (t - 1.0) / (2.0 * (t + 1.0));
}

SettingsDistribution settings_distribution_from_sv(const ProbDist& dist, int r) {
  if (r < 1 || dist.n != 2 * r) {
    throw std::invalid_argument("settings_distribution_from_sv: needs a 2r-bit distribution");
  }
  const int N = 1 << r;
  ChainScenario sc(N);
  SettingsDistribution sd{N, std::vector<double>(sc.pair_count(), 0.0)};
  double total = 0.0;
  for (int idx = 0; idx < sc.pair_count(); ++idx) {
    auto [x, y] = sc.chain_pair(idx);
    double m = dist.probs[(static_cast<std::size_t>(x) << r) | static_cast<std::size_t>(y)];
    sd.probs[idx] = m;
    total += m;
  }
  if (!(total > 0.0)) {
    throw std::domain_error("settings_distribution_from_sv: no mass on chain pairs");
  }
  for (double& p : sd.probs) p /= total;
  return sd;
}

ProtocolReport protocol_report(int r, const Epsilon& sv) {
  if (r < 1) throw std::invalid_argument("protocol_report: r must be >= 1");
  ProtocolReport rep;
  rep.r = r;
  rep.eps = sv.eps;
  rep.n_settings = std::uint64_t{1} << r;
  rep.log2_kyfan = ky_fan_bernoulli_log(r, sv).log2_value;
  rep.log2_pmin = p_min_log2(r, sv).log2_value;
  rep.beta_q = beta_q(r);
  rep.delta = delta_bound(r, sv);
  rep.delta_coarse = delta_bound_coarse(r, sv);
  rep.eps_new = eps_new(r, sv);
  rep.eps_new_lower = eps_new_lower_bound(r, sv);
  rep.threshold_simple = threshold_simple();
  rep.threshold_asymptotic = threshold_asymptotic();
  return rep;
}

std::vector<ProtocolReport> protocol_curve(const Epsilon& sv, int r_min, int r_max, int threads) {
  if (r_min < 1 || r_max < r_min) throw std::invalid_argument("protocol_curve: bad r range");
  std::vector<ProtocolReport> out(static_cast<std::size_t>(r_max - r_min + 1));
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
  for (int r = r_min; r <= r_max; ++r) {
    out[static_cast<std::size_t>(r - r_min)] = protocol_report(r, sv);
  }
  return out;
}

}  // namespace chainamp
