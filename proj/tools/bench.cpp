// Timing comparison of the OpenMP kernels against their serial references.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "chainamp/amplify.hpp"
#include "chainamp/chain_bell.hpp"
#include "chainamp/simulate.hpp"

using namespace chainamp;

namespace {

double time_ms(const std::function<void()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.1f ms %10.1f ms %8.2fx\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

}  // namespace

int main() {
  const int threads = omp_get_max_threads();
  std::printf("threads: %d\n", threads);
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    const std::uint64_t trials = 2'000'000;
    AdversaryStrategy honest{SvPart::honest(), {{1.0, quantum_box(4)}}};
    Epsilon sv(0.05);
    double ts = time_ms([&] { run_protocol_serial(2, sv, honest, trials, 7); });
    double tp = time_ms([&] { run_protocol(2, sv, honest, trials, 7, threads); });
    row("run_protocol (2M trials)", ts, tp);
  }

  {
    const int reps = 400;
    double ts = time_ms([&] {
      for (int i = 0; i < reps; ++i) lhv_minimum_serial(8);
    });
    double tp = time_ms([&] {
      for (int i = 0; i < reps; ++i) lhv_minimum(8, threads);
    });
    row("lhv_minimum (N=8, x400)", ts, tp);
  }

  {
    Epsilon sv(0.09);
    double ts = time_ms([&] { protocol_curve(sv, 1, 300, 1); });
    double tp = time_ms([&] { protocol_curve(sv, 1, 300, threads); });
    row("protocol_curve (r<=300)", ts, tp);
  }

  return 0;
}
