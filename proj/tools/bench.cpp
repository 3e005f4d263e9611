// Timing comparison of the serial reference kernels against their OpenMP
// variants: trajectory-ensemble averaging and multi-start state optimization.

#include <chrono>
#include <cstdio>
#include <omp.h>

#include "qfreq/dynamics.hpp"
#include "qfreq/optimize.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point start) {
  return std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", omp_get_max_threads());

  {
    const int n_atoms = 4;
    const int n_paths = 200000;
    const auto state = qfreq::ghz_full(n_atoms);
    const auto scheme = qfreq::SchemeSpec::conventional(n_atoms, 0.4, 0.0);
    const qfreq::NoiseParams noise{1.0, 0.25};

    auto t0 = clock_type::now();
    const auto serial = qfreq::langevin_ensemble_average_serial(state, scheme, noise, n_paths, 7);
    const double serial_ms = ms_since(t0);

    t0 = clock_type::now();
    const auto parallel = qfreq::langevin_ensemble_average(state, scheme, noise, n_paths, 7);
    const double parallel_ms = ms_since(t0);

    const double max_diff = (serial.entries - parallel.entries).cwiseAbs().maxCoeff();
    std::printf("trajectory ensemble (N=%d, %d paths)\n", n_atoms, n_paths);
    std::printf("  serial   %9.2f ms\n", serial_ms);
    std::printf("  openmp   %9.2f ms   speedup %.2fx   max |diff| %.3g\n\n",
                parallel_ms, serial_ms / parallel_ms, max_diff);
  }

  {
    const int n_atoms = 6;
    const double gamma = 1.0;
    const double t = 0.4;
    qfreq::OptimizationConfig cfg;

    auto t0 = clock_type::now();
    const auto serial = qfreq::optimize_state_at_t_serial(n_atoms, gamma, t, cfg);
    const double serial_ms = ms_since(t0);

    t0 = clock_type::now();
    const auto parallel = qfreq::optimize_state_at_t(n_atoms, gamma, t, cfg);
    const double parallel_ms = ms_since(t0);

    std::printf("state optimization (N=%d, %d restarts)\n", n_atoms, cfg.n_restarts);
    std::printf("  serial   %9.2f ms   F_Q %.12f\n", serial_ms, serial.qfi);
    std::printf("  openmp   %9.2f ms   F_Q %.12f   speedup %.2fx\n",
                parallel_ms, parallel.qfi, serial_ms / parallel_ms);
  }
  return 0;
}
