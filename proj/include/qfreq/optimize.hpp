#pragma once

#include <cstdint>

#include "qfreq/fisher.hpp"
#include "qfreq/states.hpp"

namespace qfreq {

struct OptimizationConfig {
  int n_restarts = 32;
  double rel_tol = 1e-8;  // relative convergence tolerance on F_Q
  int max_iters = 5000;   // Nelder-Mead iterations per restart
  // t-grid bounds: [t_lo_factor / (2 gamma N^2), t_hi_factor / (2 gamma)],
  // log-spaced. Brackets both the GHZ-like and the product-like optimum.
  double t_lo_factor = 1e-2;
  double t_hi_factor = 10.0;
  int t_grid_points = 60;
  double t_refine_rel_width = 1e-6;  // golden-section stop width, relative
  std::uint64_t seed = 1;

  void validate() const;
};

struct StateOptimum {
  SymmetricState state;
  double qfi = 0.0;
  bool converged = false;
};

/// Maximizes qfi_mixed(evolve_symmetric(state, 0, {gamma, t}), S_z/2) over
/// symmetric states with real non-negative amplitudes (no generality lost:
/// diagonal phase rotations commute with the dephasing and the generator).
/// Nelder-Mead from the GHZ state, the product state and seeded random
/// starts; the result is never below the GHZ or product value at the same t.
/// Restarts are independent; the parallel variant runs them under OpenMP and
/// both variants pick the winner by (value, restart index), returning
/// identical results.
StateOptimum optimize_state_at_t(int n_atoms, double gamma, double t,
                                 const OptimizationConfig& config = {});
StateOptimum optimize_state_at_t_serial(int n_atoms, double gamma, double t,
                                        const OptimizationConfig& config = {});

struct PrecisionOptimum {
  double t_opt = 0.0;
  SymmetricState state;
  double delta_min = 0.0;
  double qfi = 0.0;
  bool converged = false;
};

/// Joint minimum over interrogation time and input state: coarse log grid in
/// t (optimizing the state at every point), then golden-section refinement
/// around the best grid point with warm-started state optimization.
PrecisionOptimum optimal_precision(int n_atoms, double gamma, double total_time,
                                   const OptimizationConfig& config = {});

struct ProductOptimum {
  double t_opt = 0.0;
  double delta_min = 0.0;
  double qfi = 0.0;
};

/// Minimum over t of the bound for the fixed product state.
ProductOptimum product_precision_opt(int n_atoms, double gamma, double total_time,
                                     const OptimizationConfig& config = {});

}  // namespace qfreq
