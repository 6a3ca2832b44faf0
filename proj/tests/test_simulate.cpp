#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "chainamp/simulate.hpp"

using namespace chainamp;

namespace {

constexpr double kPi = std::numbers::pi;

AdversaryStrategy honest_quantum(int N) {
  return AdversaryStrategy{SvPart::honest(), {{1.0, quantum_box(N)}}};
}

// 0.8 chain PR + 0.2 all-zeros deterministic behind an all-"+" source.
AdversaryStrategy biased_mixture(int N) {
  std::vector<int> zeros(static_cast<std::size_t>(N), 0);
  return AdversaryStrategy{
      SvPart::fixed(ExtremalLabeling::all_plus(4)),
      {{0.8, chain_pr_box(N)}, {0.2, deterministic_box(zeros, zeros)}}};
}

ProbDist mixture_dist() { return ProbDist(2, {0.22, 0.24, 0.24, 0.30}); }

}  // namespace

TEST_SUITE("simulate") {
  TEST_CASE("honest quantum run matches the closed form") {
    auto rep = run_protocol(2, Epsilon(0.0), honest_quantum(4), 1'000'000, 20260815);
    CHECK(rep.trials == 1'000'000);
    CHECK(rep.kept <= rep.trials);

    double v = std::sin(kPi / 16.0) * std::sin(kPi / 16.0);
    CHECK(std::abs(rep.bell_value - v) < 3.0 * rep.bell_se);
    CHECK(std::abs(rep.alice_bias) < 3.0 * rep.alice_bias_se);

    // Uniform settings keep 2N of N^2 combinations.
    double keep_rate = static_cast<double>(rep.kept) / static_cast<double>(rep.trials);
    double keep_se = std::sqrt(0.5 * 0.5 / 1e6);
    CHECK(std::abs(keep_rate - 0.5) < 4.0 * keep_se);

    // Kept trials spread evenly over the 8 chain pairs.
    CHECK(rep.pair_counts.size() == 8);
    std::uint64_t sum = 0;
    for (auto c : rep.pair_counts) sum += c;
    CHECK(sum == rep.kept);
    CHECK(rep.min_pair_prob == doctest::Approx(0.125).epsilon(0.02));
  }

  TEST_CASE("honest chain PR run never fails a Bell term") {
    auto rep = run_protocol(2, Epsilon(0.0),
                            AdversaryStrategy{SvPart::honest(), {{1.0, chain_pr_box(4)}}},
                            200'000, 99);
    CHECK(rep.bell_fail_count == 0);
    CHECK(rep.bell_value == 0.0);
    CHECK(rep.bell_se == 0.0);
    CHECK(std::abs(rep.alice_bias) < 3.0 * rep.alice_bias_se);
  }

  TEST_CASE("adversarial mixture shifts the outcome bias") {
    auto rep = run_protocol(2, Epsilon(0.1), biased_mixture(4), 1'000'000, 31337);

    // delta = 0.2 worth of deterministic boxes biases Alice by delta/2.
    CHECK(std::abs(rep.alice_bias - 0.1) < 3.0 * rep.alice_bias_se);

    // The all-"+" source draws iid bits with P(0) = 0.6; conditioned on the
    // chain, the wrap pair (0,3) has mass 0.0576/0.5104 and only the
    // deterministic component fails there.
    double v = 0.2 * (0.0576 / 0.5104);
    CHECK(std::abs(rep.bell_value - v) < 4.0 * rep.bell_se);

    // Post-selected minimum pair: strings 0011 and 1111 both have mass
    // p_-^2 p_+^2... the all-plus source gives min mass p_-^4 at (3,3).
    CHECK(rep.min_pair_prob == doctest::Approx(0.0256 / 0.5104).epsilon(0.05));
  }

  TEST_CASE("sampled source realizes the mixture distribution") {
    AdversaryStrategy strat{SvPart::sampled_from(mixture_dist()), {{1.0, quantum_box(2)}}};
    auto rep = run_protocol(1, Epsilon(0.1), strat, 1'000'000, 777);

    // At N=2 every settings pair is on the chain.
    CHECK(rep.kept == rep.trials);

    // Canonical pair order (0,0), (1,0), (1,1), (0,1) against the mixture
    // masses of the strings 00, 10, 11, 01.
    const double expect[] = {0.22, 0.24, 0.30, 0.24};
    for (int i = 0; i < 4; ++i) {
      double phat = static_cast<double>(rep.pair_counts[static_cast<std::size_t>(i)]) /
                    static_cast<double>(rep.kept);
      double se = std::sqrt(expect[i] * (1.0 - expect[i]) / 1e6);
      CHECK(std::abs(phat - expect[i]) < 4.0 * se);
    }

    // The quantum box spends the same failure weight on every pair.
    double v = std::sin(kPi / 8.0) * std::sin(kPi / 8.0);
    CHECK(std::abs(rep.bell_value - v) < 3.0 * rep.bell_se);
  }

  TEST_CASE("reports are bit-identical across schedules") {
    for (std::uint64_t seed : {1ull, 42ull, 31337ull}) {
      auto serial = run_protocol_serial(2, Epsilon(0.1), biased_mixture(4), 50'000, seed);
      auto one = run_protocol(2, Epsilon(0.1), biased_mixture(4), 50'000, seed, 1);
      auto eight = run_protocol(2, Epsilon(0.1), biased_mixture(4), 50'000, seed, 8);
      CHECK(serial == one);
      CHECK(one == eight);
    }

    auto a = run_protocol(1, Epsilon(0.0), honest_quantum(2), 10'000, 5, 3);
    auto b = run_protocol(1, Epsilon(0.0), honest_quantum(2), 10'000, 5, 7);
    CHECK(a == b);
    auto c = run_protocol(1, Epsilon(0.0), honest_quantum(2), 10'000, 6, 3);
    CHECK(a != c);
  }

  TEST_CASE("sweep derives distinct seeds and stays reproducible") {
    std::vector<AdversaryStrategy> cells(3, honest_quantum(4));
    auto runs = sweep_strategies(2, Epsilon(0.0), cells, 200'000, 2026);
    REQUIRE(runs.size() == 3);
    CHECK(runs[0] != runs[1]);
    CHECK(runs[1] != runs[2]);
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
      double se = std::sqrt(runs[i].bell_se * runs[i].bell_se +
                            runs[i + 1].bell_se * runs[i + 1].bell_se);
      CHECK(std::abs(runs[i].bell_value - runs[i + 1].bell_value) < 3.0 * se);
    }
    auto again = sweep_strategies(2, Epsilon(0.0), cells, 200'000, 2026);
    for (std::size_t i = 0; i < runs.size(); ++i) CHECK(runs[i] == again[i]);
  }

  TEST_CASE("post-selection can starve and then throws") {
    // At r=2 a single trial is discarded half the time; some seed below 100
    // must hit each side.
    int threw = 0, kept = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      try {
        auto rep = run_protocol(2, Epsilon(0.0), honest_quantum(4), 1, seed);
        CHECK(rep.kept == 1);
        ++kept;
      } catch (const std::domain_error&) {
        ++threw;
      }
    }
    CHECK(threw > 0);
    CHECK(kept > 0);
  }

  TEST_CASE("strategy validation") {
    CHECK_THROWS_AS(run_protocol(0, Epsilon(0.1), honest_quantum(1), 10, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_protocol(16, Epsilon(0.1), honest_quantum(4), 10, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_protocol(2, Epsilon(0.1), honest_quantum(4), 0, 1),
                    std::invalid_argument);

    // Box list must be a distribution over boxes of the right size.
    AdversaryStrategy empty{SvPart::honest(), {}};
    CHECK_THROWS_AS(run_protocol(2, Epsilon(0.1), empty, 10, 1), std::invalid_argument);
    AdversaryStrategy wrong_n{SvPart::honest(), {{1.0, quantum_box(8)}}};
    CHECK_THROWS_AS(run_protocol(2, Epsilon(0.1), wrong_n, 10, 1), std::invalid_argument);
    AdversaryStrategy short_weights{SvPart::honest(), {{0.7, quantum_box(4)}}};
    CHECK_THROWS_AS(run_protocol(2, Epsilon(0.1), short_weights, 10, 1),
                    std::invalid_argument);
    AdversaryStrategy negative{SvPart::honest(),
                               {{1.2, quantum_box(4)}, {-0.2, quantum_box(4)}}};
    CHECK_THROWS_AS(run_protocol(2, Epsilon(0.1), negative, 10, 1), std::invalid_argument);

    // Fixed labelings need matching width and a non-degenerate source.
    AdversaryStrategy bad_width{SvPart::fixed(ExtremalLabeling::all_plus(2)),
                                {{1.0, quantum_box(4)}}};
    CHECK_THROWS_AS(run_protocol(2, Epsilon(0.1), bad_width, 10, 1), std::invalid_argument);
    AdversaryStrategy no_freedom{SvPart::fixed(ExtremalLabeling::all_plus(4)),
                                 {{1.0, quantum_box(4)}}};
    CHECK_THROWS_AS(run_protocol(2, Epsilon(0.0), no_freedom, 10, 1), std::invalid_argument);

    // Sampled sources must be SV-valid for the stated eps.
    ProbDist det(2, {1.0, 0.0, 0.0, 0.0});
    AdversaryStrategy bad_dist{SvPart::sampled_from(det), {{1.0, quantum_box(2)}}};
    CHECK_THROWS_AS(run_protocol(1, Epsilon(0.1), bad_dist, 10, 1), std::invalid_argument);
    AdversaryStrategy tight{SvPart::sampled_from(mixture_dist()), {{1.0, quantum_box(2)}}};
    CHECK_THROWS_AS(run_protocol(1, Epsilon(0.05), tight, 10, 1), std::invalid_argument);
  }

  TEST_CASE("fixed labeling bias shows up in the settings histogram") {
    // All-"+" at eps = 0.1 draws iid bits with P(0) = 0.6, so pair (0,0)
    // carries mass 0.1296/0.5104 after post-selection.
    AdversaryStrategy strat{SvPart::fixed(ExtremalLabeling::all_plus(4)),
                            {{1.0, quantum_box(4)}}};
    auto rep = run_protocol(2, Epsilon(0.1), strat, 1'000'000, 4242);
    double expect = 0.1296 / 0.5104;
    double phat = static_cast<double>(rep.pair_counts[0]) / static_cast<double>(rep.kept);
    double se = std::sqrt(expect * (1.0 - expect) / static_cast<double>(rep.kept));
    CHECK(std::abs(phat - expect) < 4.0 * se);
    CHECK(rep.min_pair_prob == doctest::Approx(0.0256 / 0.5104).epsilon(0.05));
  }
}
