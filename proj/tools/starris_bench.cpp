// Timing harness comparing the OpenMP kernels against their serial
// references: elementwise projections, brute-force enumeration, and the
// exhaustive MS search.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "starris/oracle.hpp"
#include "starris/solver.hpp"

using namespace starris;

namespace {

double time_best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    best = std::min(best, s);
  }
  return best;
}

void row(const char* name, double serial_s, double parallel_s) {
  std::printf("%-28s %10.1f ms %10.1f ms %8.2fx\n", name, serial_s * 1e3,
              parallel_s * 1e3, serial_s / parallel_s);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp",
              "speedup");

  SplitMix64 rng(99);
  const int m = 400000;
  Eigen::VectorXcd v_t(m), v_r(m);
  for (int i = 0; i < m; ++i) {
    v_t(i) = 1.5 * rng.gaussian_c();
    v_r(i) = 1.5 * rng.gaussian_c();
  }

  for (const int case_index : {2, 4, 6, 8}) {
    const StarConfig config = StarConfig::from_case(case_index, 8);
    AuxCoeffs sink;
    const double serial_s = time_best_of(
        3, [&] { sink = project_star_serial(v_t, v_r, config); });
    const double parallel_s =
        time_best_of(3, [&] { sink = project_star(v_t, v_r, config); });
    char name[64];
    std::snprintf(name, sizeof(name), "project case %d (M=%d)", case_index,
                  m);
    row(name, serial_s, parallel_s);
  }

  {
    const StarConfig config = StarConfig::from_case(2, 8);
    const int mb = 50000;
    const Eigen::VectorXcd b_t = v_t.head(mb);
    const Eigen::VectorXcd b_r = v_r.head(mb);
    BruteForceResult sink;
    const double serial_s = time_best_of(
        3, [&] { sink = project_brute_force_serial(b_t, b_r, config); });
    const double parallel_s =
        time_best_of(3, [&] { sink = project_brute_force(b_t, b_r, config); });
    row("brute force TS L=8", serial_s, parallel_s);
  }

  {
    ScenarioSpec spec;
    spec.m_elements = 6;
    spec.n_antennas = 4;
    spec.k_reflect = 1;
    spec.k_transmit = 1;
    spec.p_bs_dbm = 20.0;
    SplitMix64 channel_rng(derive_seed(7, 0));
    const ChannelSet ch = build_channels(spec, channel_rng);
    const OracleBudget budget;
    ExhaustiveResult sink;
    const double serial_s = time_best_of(1, [&] {
      sink = exhaustive_ms_search_serial(ch, spec.p_bs_watts(), 2, budget);
    });
    const double parallel_s = time_best_of(1, [&] {
      sink = exhaustive_ms_search(ch, spec.p_bs_watts(), 2, budget);
    });
    row("exhaustive MS M=6 L=2", serial_s, parallel_s);
  }

  return 0;
}
