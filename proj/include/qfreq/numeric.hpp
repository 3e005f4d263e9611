#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qfreq {

// Binomial coefficient, computed multiplicatively. Exact in double up to the
// 2^53 integer limit, which covers every n used by the library.
inline double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / i;
  return c;
}

// Cumulative log-factorial table: entry m is log(m!). Used for stable
// binomial weights at large counts.
inline std::vector<double> log_factorial_table(std::int64_t max_n) {
  if (max_n < 0) throw std::invalid_argument("log_factorial_table: negative size");
  std::vector<double> lf(static_cast<std::size_t>(max_n) + 1, 0.0);
  for (std::int64_t m = 2; m <= max_n; ++m)
    lf[static_cast<std::size_t>(m)] =
        lf[static_cast<std::size_t>(m - 1)] + std::log(static_cast<double>(m));
  return lf;
}

inline double log_choose(const std::vector<double>& lf, std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return lf[static_cast<std::size_t>(n)] - lf[static_cast<std::size_t>(k)] -
         lf[static_cast<std::size_t>(n - k)];
}

inline double clamp_to_unit_interval(double x) {
  return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x);
}

}  // namespace qfreq
