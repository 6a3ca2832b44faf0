#include <doctest.h>
#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "chainamp/epsilon.hpp"
#include "chainamp/ky_fan.hpp"
#include "chainamp/rational.hpp"
#include "chainamp/sv_source.hpp"

using namespace chainamp;

namespace {

const double kEpsGrid[] = {0.0, 0.05, 0.086, 0.2, 0.3};

// Top-(2^{r+1}-1) layer sum truncated at binomial layer cap, in exact
// rationals; the eps is taken as the exact value of the double.
mpq_class truncated_layer_sum(int r, double eps, unsigned long cap) {
  mpq_class pp = mpq_class(1, 2) + mpq_class(eps);
  mpq_class pm = mpq_class(1, 2) - mpq_class(eps);
  mpq_class sum(0);
  mpq_class term;
  for (unsigned long i = 0; i <= cap; ++i) {
    term = exact_binomial(2ul * r, i);
    for (unsigned long j = 0; j < i; ++j) term *= pm;
    for (unsigned long j = 0; j < 2ul * r - i; ++j) term *= pp;
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_SUITE("kyfan") {
  TEST_CASE("bruteforce top-k sums") {
    CHECK(ky_fan_bruteforce(ProbDist::uniform(2), 3) == doctest::Approx(0.75).epsilon(1e-15));
    auto ber = bernoulli_distribution<double>(2, Epsilon(0.1));
    CHECK(ky_fan_bruteforce(ber, 3) == doctest::Approx(0.84).epsilon(1e-15));
    CHECK(ky_fan_bruteforce(ber, 4) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(ky_fan_bruteforce(ber, 0), std::invalid_argument);
    CHECK_THROWS_AS(ky_fan_bruteforce(ber, 5), std::invalid_argument);
  }

  TEST_CASE("top-k sums are non-decreasing in k") {
    auto dist = bernoulli_distribution<double>(6, Epsilon(0.2));
    double prev = 0.0;
    for (std::uint64_t k = 1; k <= dist.size(); ++k) {
      double v = ky_fan_bruteforce(dist, k);
      CHECK(v >= prev);
      prev = v;
    }
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("closed form examples") {
    auto a = ky_fan_bernoulli_exact(1, Epsilon(0.1));
    CHECK(a.k == 3);
    CHECK(a.value == doctest::Approx(0.84).epsilon(1e-15));
    CHECK(a.mode == KyFanMode::closed);

    auto b = ky_fan_bernoulli_exact(2, Epsilon(0.1));
    CHECK(b.k == 7);
    CHECK(b.value == doctest::Approx(0.5904).epsilon(1e-14));

    auto c = ky_fan_bernoulli_exact(3, Epsilon(0.0));
    CHECK(c.k == 15);
    CHECK(c.value == doctest::Approx(15.0 / 64.0).epsilon(1e-15));
  }

  TEST_CASE("closed form matches brute force across the grid") {
    for (int r = 1; r <= 10; ++r) {
      for (double eps : kEpsGrid) {
        Epsilon sv(eps);
        auto res = ky_fan_bernoulli_exact(r, sv);
        auto dist = bernoulli_distribution<double>(2 * r, sv);
        double oracle = ky_fan_bruteforce(dist, (std::uint64_t{1} << (r + 1)) - 1);
        CHECK(res.value == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(res.value > 0.0);
        CHECK(res.value <= 1.0 + 1e-15);
        CHECK(res.log2_value.to_linear() == doctest::Approx(res.value).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("whole-layer mode overshoots the closed form") {
    for (int r = 1; r <= 10; ++r) {
      for (double eps : kEpsGrid) {
        Epsilon sv(eps);
        auto layer = ky_fan_bernoulli_layer(r, sv);
        auto exact = ky_fan_bernoulli_exact(r, sv);
        CHECK(layer.mode == KyFanMode::layer);
        CHECK(layer.k >= exact.k);
        CHECK(layer.value >= exact.value - 1e-15);
      }
    }
    // r=1 keeps k = 3 = C(2,0) + C(2,1), so the two modes agree.
    CHECK(ky_fan_bernoulli_layer(1, Epsilon(0.1)).value ==
          doctest::Approx(0.84).epsilon(1e-15));
  }

  TEST_CASE("log-domain evaluation agrees with the closed form and scales") {
    for (int r = 1; r <= 10; ++r) {
      for (double eps : kEpsGrid) {
        Epsilon sv(eps);
        auto exact = ky_fan_bernoulli_exact(r, sv);
        LogReal lg = ky_fan_bernoulli_log(r, sv);
        CHECK(lg.log2_value == doctest::Approx(exact.log2_value.log2_value).epsilon(1e-9));
      }
    }
    // Far beyond the linear range: finite, negative, decreasing in r.
    double prev = 0.0;
    for (int r : {100, 200, 400, 800}) {
      double lv = ky_fan_bernoulli_log(r, Epsilon(0.05)).log2_value;
      CHECK(std::isfinite(lv));
      CHECK(lv < prev);
      prev = lv;
    }
  }

  TEST_CASE("linear closed form rejects overflowing orders") {
    CHECK_THROWS_AS(ky_fan_bernoulli_exact(63, Epsilon(0.1)), std::invalid_argument);
    CHECK_THROWS_AS(ky_fan_bernoulli_layer(63, Epsilon(0.1)), std::invalid_argument);
    CHECK_THROWS_AS(ky_fan_bernoulli_exact(0, Epsilon(0.1)), std::invalid_argument);
    CHECK_NOTHROW(ky_fan_bernoulli_log(400, Epsilon(0.1)));
  }

  TEST_CASE("rational closed form is exact") {
    mpq_class v = ky_fan_bernoulli_exact_rational(2, mpq_class(1, 10));
    CHECK(v == mpq_class(369, 625));
    CHECK(rational_to_double(v) == doctest::Approx(0.5904).epsilon(1e-16));

    for (int r = 1; r <= 8; ++r) {
      mpq_class q = ky_fan_bernoulli_exact_rational(r, mpq_class(1, 20));
      double d = ky_fan_bernoulli_exact(r, Epsilon(0.05)).value;
      CHECK(rational_to_double(q) == doctest::Approx(d).epsilon(1e-13));
      CHECK(q > 0);
      CHECK(q <= 1);
    }
  }

  TEST_CASE("layer cutoff counts") {
    auto a = layer_cutoff(1);
    CHECK(a.m == 1);  // C(2,0) + C(2,1) = 3 >= 3
    CHECK(a.c_finite == doctest::Approx(1.0));

    auto b = layer_cutoff(2);
    CHECK(b.m == 2);  // 1 + 4 = 5 < 7, 1 + 4 + 6 = 11 >= 7

    auto c = layer_cutoff(50);
    CHECK(c.c_finite >= 0.22);
    CHECK(c.c_finite <= 0.30);

    // The finite-r ratio never drops below the asymptotic constant.
    for (int r = 1; r <= 500; ++r) CHECK(layer_cutoff(r).c_finite >= 0.22);
  }

  TEST_CASE("layer cutoff is the minimal covering layer") {
    for (int r : {5, 9, 17, 33, 60}) {
      auto cut = layer_cutoff(r);
      mpz_class k = (mpz_class(1) << (r + 1)) - 1;
      mpz_class below(0), at(0);
      for (unsigned long i = 0; i < cut.m; ++i) below += exact_binomial(2ul * r, i);
      at = below + exact_binomial(2ul * r, cut.m);
      CHECK(below < k);
      CHECK(at >= k);
    }
  }

  TEST_CASE("binary entropy and the asymptotic constant") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(binary_entropy(0.11) == doctest::Approx(0.4999).epsilon(1e-3));
    CHECK(binary_entropy(0.05) < 0.5);
    CHECK(binary_entropy(0.25) > 0.5);

    double c = solve_c_asymptotic(1e-14);
    CHECK(c == doctest::Approx(0.22).epsilon(0.025));
    CHECK(c == doctest::Approx(0.2200557288767191).epsilon(1e-10));
    CHECK(binary_entropy(c / 2) == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("bound factor examples and validity range") {
    double c = solve_c_asymptotic(1e-14);
    double k0 = (2.0 - c) / (2.0 * (1.0 - c));
    CHECK(lemma2_bound_factor(Epsilon(0.0)) == doctest::Approx(k0).epsilon(1e-12));
    CHECK(lemma2_bound_factor(Epsilon(0.0)) == doctest::Approx(1.141).epsilon(1e-3));
    CHECK(lemma2_bound_factor(Epsilon(0.2)) > 1.0);
    CHECK_THROWS_AS(lemma2_bound_factor(Epsilon(0.39)), std::invalid_argument);
    CHECK_THROWS_AS(lemma2_bounds(100, Epsilon(0.4)), std::invalid_argument);
  }

  TEST_CASE("log binomial matches exact integers") {
    CHECK(log_binomial(4, 2).log2_value == doctest::Approx(std::log2(6.0)).epsilon(1e-12));
    CHECK(log_binomial(20, 0).log2_value == doctest::Approx(0.0));
    CHECK(log_binomial(400, 44).log2_value ==
          doctest::Approx(log2_mpz(exact_binomial(400, 44))).epsilon(1e-9));
    for (unsigned long n : {10ul, 37ul, 60ul}) {
      for (unsigned long k = 0; k <= n; ++k) {
        CHECK(log_binomial(n, k).log2_value ==
              doctest::Approx(log2_mpz(exact_binomial(n, k))).epsilon(1e-9));
      }
    }
    CHECK_THROWS_AS(log_binomial(4, 5), std::invalid_argument);
  }

  TEST_CASE("lower bound stays below the exact norm at large r") {
    for (int r : {50, 100, 200}) {
      for (double eps : {0.01, 0.05, 0.086, 0.2, 0.3}) {
        Epsilon sv(eps);
        auto bounds = lemma2_bounds(r, sv);
        double exact = ky_fan_bernoulli_log(r, sv).log2_value;
        CHECK(bounds.lower.log2_value < exact);
        CHECK(bounds.lower.log2_value < bounds.upper.log2_value);
      }
    }
  }

  TEST_CASE("upper bound dominates the geometric layer sum it bounds") {
    // The bound constant comes from summing the ratio-alpha geometric series
    // below layer floor(c r), so it must dominate that truncated sum.
    double c = solve_c_asymptotic(1e-14);
    for (int r : {50, 100}) {
      for (double eps : {0.01, 0.05, 0.086, 0.2, 0.3}) {
        auto bounds = lemma2_bounds(r, Epsilon(eps));
        auto cap = static_cast<unsigned long>(c * r);
        double truncated = log2_mpq(truncated_layer_sum(r, eps, cap));
        CHECK(truncated <= bounds.upper.log2_value);
      }
    }
  }

  TEST_CASE("term ratios below the cutoff obey the alpha bound") {
    double c = solve_c_asymptotic(1e-14);
    for (int r = 5; r <= 30; ++r) {
      for (double eps : {0.05, 0.2, 0.3, 0.38}) {
        double alpha = c * (1.0 + 2.0 * eps) / ((2.0 - c) * (1.0 - 2.0 * eps));
        CHECK(alpha < 1.0);
        auto cr = static_cast<unsigned long>(c * r);
        for (unsigned long i = 1; i <= cr; ++i) {
          double ratio =
              i * (1.0 + 2.0 * eps) / ((2.0 * r - i + 1.0) * (1.0 - 2.0 * eps));
          CHECK(ratio < alpha);
        }
      }
    }
  }

  TEST_CASE("layer counts bracket the largest binomial term") {
    double c = solve_c_asymptotic(1e-14);
    for (int r = 5; r <= 30; ++r) {
      auto cr = static_cast<unsigned long>(c * r);
      mpz_class top = exact_binomial(2ul * r, cr);
      mpz_class sum(0);
      for (unsigned long i = 0; i <= cr; ++i) sum += exact_binomial(2ul * r, i);
      CHECK(top < sum);
      CHECK(sum < (cr + 1) * top);
    }
  }
}
