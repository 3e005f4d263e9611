#pragma once

#include <cstdint>
#include <vector>

#include "qfreq/states.hpp"

namespace qfreq {

/// Dephasing rate gamma and evolution time t, both finite and non-negative.
struct NoiseParams {
  double gamma = 0.0;
  double t = 0.0;

  void validate() const;
};

/// Density matrix in the symmetric Fock basis |k, N-k>, (N+1) x (N+1).
struct SymDensityMatrix {
  int n_atoms = 0;
  Eigen::MatrixXcd entries;
};

/// Density matrix over the full 2^N computational basis (oracle scale).
struct FullDensityMatrix {
  int n_atoms = 0;
  Eigen::MatrixXcd entries;
};

/// Closed-form collective-dephasing evolution in the symmetric subspace:
///   rho_kl(t) = alpha_k alpha_l^* exp(-gamma t (k-l)^2) exp(-i delta t (k-l)).
SymDensityMatrix evolve_symmetric(const SymmetricState& state, double detuning,
                                  const NoiseParams& noise);

/// Closed-form evolution over the full basis. H_0 and L are simultaneously
/// diagonal for every scheme, so the master equation solves elementwise:
///   rho_ab(t) = rho_ab(0) exp(-i (E_a - E_b) t) exp(-(gamma/4) (L_a - L_b)^2 t).
FullDensityMatrix evolve_full(const FullState& state, const SchemeSpec& scheme,
                              const NoiseParams& noise);

/// One exact stochastic trajectory: |psi(t)> = e^{-i H_0 t} e^{-i sqrt(gamma/2) L W} |psi(0)>
/// with W ~ Normal(0, t). Exact because L is diagonal and time-independent, so
/// the Stratonovich path integral collapses to a single Gaussian phase.
FullState langevin_trajectory(const FullState& state, const SchemeSpec& scheme,
                              const NoiseParams& noise, std::uint64_t seed);

/// Euler-Maruyama integration of the Ito form
///   |d psi> = (-i H_0 - (gamma/4) L^2)|psi> dt - i sqrt(gamma/2) L |psi> dW,
/// renormalized after every step. Kept as a validation path for the exact
/// sampler; converges weakly as n_steps grows.
FullState euler_maruyama_trajectory(const FullState& state, const SchemeSpec& scheme,
                                    const NoiseParams& noise, int n_steps,
                                    std::uint64_t seed);

/// (1/M) sum_m |psi_m><psi_m| over a non-empty, dimension-consistent list.
FullDensityMatrix trajectory_average(const std::vector<FullState>& trajectories);

/// Ensemble average of n_paths exact trajectories with per-path seeds
/// seed + path_index. Paths are accumulated in fixed-size chunks and the
/// chunk partials are reduced in index order, so the result is bitwise
/// independent of the thread count; the serial variant uses the same chunking
/// and returns bitwise-identical output. The parallel variant runs the chunk
/// loop under OpenMP.
FullDensityMatrix langevin_ensemble_average(const FullState& state,
                                            const SchemeSpec& scheme,
                                            const NoiseParams& noise, int n_paths,
                                            std::uint64_t seed);
FullDensityMatrix langevin_ensemble_average_serial(const FullState& state,
                                                   const SchemeSpec& scheme,
                                                   const NoiseParams& noise,
                                                   int n_paths, std::uint64_t seed);

/// Monte-Carlo statistics of one density-matrix element rho_ab from exact
/// trajectories: the sample mean of psi_a psi_b^* and the standard error of
/// its magnitude (variance of the component along the mean direction).
/// std_error = 0 flags a deterministic (gamma = 0 or single-path) estimate.
/// Seeding matches langevin_ensemble_average.
struct CoherenceStats {
  Complex mean;
  double std_error = 0.0;
  int n_paths = 0;
};
CoherenceStats coherence_statistics(const FullState& state, const SchemeSpec& scheme,
                                    const NoiseParams& noise, std::int64_t index_a,
                                    std::int64_t index_b, int n_paths, std::uint64_t seed);

}  // namespace qfreq
