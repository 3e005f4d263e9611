#include "qfreq/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qfreq/rng.hpp"

namespace qfreq {

namespace {

constexpr int kEnsembleChunk = 256;

// Diagonals of H_0 and L over the full basis, computed once per evolution.
struct DiagonalOperators {
  Eigen::VectorXd h0;
  Eigen::VectorXd noise;
};

DiagonalOperators build_diagonals(const SchemeSpec& scheme) {
  scheme.validate();
  const std::int64_t dim = std::int64_t{1} << scheme.n_atoms;
  DiagonalOperators ops;
  ops.h0.resize(dim);
  ops.noise.resize(dim);
  for (std::int64_t a = 0; a < dim; ++a) {
    ops.h0(a) = scheme.h0_diagonal(static_cast<std::uint64_t>(a));
    ops.noise(a) = scheme.noise_diagonal(static_cast<std::uint64_t>(a));
  }
  return ops;
}

void require_match(const FullState& state, const SchemeSpec& scheme) {
  if (state.n_atoms != scheme.n_atoms)
    throw std::invalid_argument("atom count mismatch between state and scheme");
  if (state.n_atoms > kMaxFullAtoms)
    throw std::invalid_argument("atom count exceeds full-representation cap");
}

// Exact per-path phases for one Wiener draw.
FullState sampled_path(const FullState& state, const DiagonalOperators& ops,
                       const NoiseParams& noise, std::uint64_t seed) {
  NormalSampler gauss(seed);
  const double w = gauss.next() * std::sqrt(noise.t);
  const double noise_scale = std::sqrt(noise.gamma / 2.0);
  FullState out = state;
  for (std::int64_t a = 0; a < out.amplitudes.size(); ++a) {
    const double phase = ops.h0(a) * noise.t + noise_scale * ops.noise(a) * w;
    out.amplitudes(a) *= Complex(std::cos(phase), -std::sin(phase));
  }
  return out;
}

FullDensityMatrix ensemble_average_impl(const FullState& state, const SchemeSpec& scheme,
                                        const NoiseParams& noise, int n_paths,
                                        std::uint64_t seed, bool parallel) {
  require_match(state, scheme);
  noise.validate();
  if (n_paths < 1) throw std::invalid_argument("ensemble average needs at least one path");
  const DiagonalOperators ops = build_diagonals(scheme);
  const std::int64_t dim = state.amplitudes.size();
  const int n_chunks = (n_paths + kEnsembleChunk - 1) / kEnsembleChunk;
  std::vector<Eigen::MatrixXcd> partials(static_cast<std::size_t>(n_chunks));

#pragma omp parallel for schedule(static) if (parallel)
  for (int c = 0; c < n_chunks; ++c) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
    const int begin = c * kEnsembleChunk;
    const int end = std::min(n_paths, begin + kEnsembleChunk);
    for (int m = begin; m < end; ++m) {
      const FullState path =
          sampled_path(state, ops, noise, seed + static_cast<std::uint64_t>(m));
      acc.noalias() += path.amplitudes * path.amplitudes.adjoint();
    }
    partials[static_cast<std::size_t>(c)] = std::move(acc);
  }

  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& part : partials) total += part;
  return FullDensityMatrix{state.n_atoms, total / static_cast<double>(n_paths)};
}

}  // namespace

void NoiseParams::validate() const {
  if (!(std::isfinite(gamma) && gamma >= 0.0))
    throw std::invalid_argument("NoiseParams: gamma must be finite and >= 0");
  if (!(std::isfinite(t) && t >= 0.0))
    throw std::invalid_argument("NoiseParams: t must be finite and >= 0");
}

SymDensityMatrix evolve_symmetric(const SymmetricState& state, double detuning,
                                  const NoiseParams& noise) {
  noise.validate();
  const int n = state.n_atoms;
  if (state.amplitudes.size() != n + 1)
    throw std::invalid_argument("evolve_symmetric: amplitude length mismatch");
  SymDensityMatrix rho;
  rho.n_atoms = n;
  rho.entries.resize(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) {
    for (int l = 0; l <= n; ++l) {
      const int d = k - l;
      const double decay = std::exp(-noise.gamma * noise.t * d * d);
      const double phase = -detuning * noise.t * d;
      rho.entries(k, l) = state.amplitudes(k) * std::conj(state.amplitudes(l)) *
                          decay * Complex(std::cos(phase), std::sin(phase));
    }
  }
  return rho;
}

FullDensityMatrix evolve_full(const FullState& state, const SchemeSpec& scheme,
                              const NoiseParams& noise) {
  require_match(state, scheme);
  noise.validate();
  const DiagonalOperators ops = build_diagonals(scheme);
  const std::int64_t dim = state.amplitudes.size();
  FullDensityMatrix rho;
  rho.n_atoms = state.n_atoms;
  rho.entries.resize(dim, dim);
  for (std::int64_t a = 0; a < dim; ++a) {
    for (std::int64_t b = 0; b < dim; ++b) {
      const double de = ops.h0(a) - ops.h0(b);
      const double dl = ops.noise(a) - ops.noise(b);
      const double decay = std::exp(-0.25 * noise.gamma * dl * dl * noise.t);
      const double phase = -de * noise.t;
      rho.entries(a, b) = state.amplitudes(a) * std::conj(state.amplitudes(b)) *
                          decay * Complex(std::cos(phase), std::sin(phase));
    }
  }
  return rho;
}

FullState langevin_trajectory(const FullState& state, const SchemeSpec& scheme,
                              const NoiseParams& noise, std::uint64_t seed) {
  require_match(state, scheme);
  noise.validate();
  return sampled_path(state, build_diagonals(scheme), noise, seed);
}

FullState euler_maruyama_trajectory(const FullState& state, const SchemeSpec& scheme,
                                    const NoiseParams& noise, int n_steps,
                                    std::uint64_t seed) {
  require_match(state, scheme);
  noise.validate();
  if (n_steps < 1) throw std::invalid_argument("euler_maruyama_trajectory: n_steps must be >= 1");
  const DiagonalOperators ops = build_diagonals(scheme);
  const double dt = noise.t / n_steps;
  const double sqrt_dt = std::sqrt(dt);
  const double noise_scale = std::sqrt(noise.gamma / 2.0);
  NormalSampler gauss(seed);
  FullState out = state;
  for (int step = 0; step < n_steps; ++step) {
    const double dw = gauss.next() * sqrt_dt;
    for (std::int64_t a = 0; a < out.amplitudes.size(); ++a) {
      const double l = ops.noise(a);
      const Complex drift(-0.25 * noise.gamma * l * l * dt, -ops.h0(a) * dt);
      const Complex kick(0.0, -noise_scale * l * dw);
      out.amplitudes(a) *= 1.0 + drift + kick;
    }
    out.amplitudes /= out.amplitudes.norm();
  }
  return out;
}

FullDensityMatrix trajectory_average(const std::vector<FullState>& trajectories) {
  if (trajectories.empty())
    throw std::invalid_argument("trajectory_average: empty trajectory list");
  const int n = trajectories.front().n_atoms;
  const std::int64_t dim = trajectories.front().amplitudes.size();
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& traj : trajectories) {
    if (traj.n_atoms != n || traj.amplitudes.size() != dim)
      throw std::invalid_argument("trajectory_average: inconsistent trajectories");
    total.noalias() += traj.amplitudes * traj.amplitudes.adjoint();
  }
  return FullDensityMatrix{n, total / static_cast<double>(trajectories.size())};
}

FullDensityMatrix langevin_ensemble_average(const FullState& state, const SchemeSpec& scheme,
                                            const NoiseParams& noise, int n_paths,
                                            std::uint64_t seed) {
  return ensemble_average_impl(state, scheme, noise, n_paths, seed, true);
}

FullDensityMatrix langevin_ensemble_average_serial(const FullState& state,
                                                   const SchemeSpec& scheme,
                                                   const NoiseParams& noise, int n_paths,
                                                   std::uint64_t seed) {
  return ensemble_average_impl(state, scheme, noise, n_paths, seed, false);
}

CoherenceStats coherence_statistics(const FullState& state, const SchemeSpec& scheme,
                                    const NoiseParams& noise, std::int64_t index_a,
                                    std::int64_t index_b, int n_paths, std::uint64_t seed) {
  require_match(state, scheme);
  noise.validate();
  if (n_paths < 1) throw std::invalid_argument("coherence_statistics: need at least one path");
  const std::int64_t dim = state.amplitudes.size();
  if (index_a < 0 || index_a >= dim || index_b < 0 || index_b >= dim)
    throw std::invalid_argument("coherence_statistics: basis index out of range");
  const DiagonalOperators ops = build_diagonals(scheme);
  const double noise_scale = std::sqrt(noise.gamma / 2.0);
  const double de = ops.h0(index_a) - ops.h0(index_b);
  const double dl = ops.noise(index_a) - ops.noise(index_b);
  const Complex base = state.amplitudes(index_a) * std::conj(state.amplitudes(index_b));

  std::vector<Complex> samples(static_cast<std::size_t>(n_paths));
#pragma omp parallel for schedule(static)
  for (int m = 0; m < n_paths; ++m) {
    NormalSampler gauss(seed + static_cast<std::uint64_t>(m));
    const double w = gauss.next() * std::sqrt(noise.t);
    const double phase = de * noise.t + noise_scale * dl * w;
    samples[static_cast<std::size_t>(m)] = base * Complex(std::cos(phase), -std::sin(phase));
  }

  Complex sum(0.0, 0.0);
  for (const Complex& x : samples) sum += x;
  const Complex mean = sum / static_cast<double>(n_paths);

  CoherenceStats stats;
  stats.mean = mean;
  stats.n_paths = n_paths;
  const double mag = std::abs(mean);
  if (n_paths > 1 && mag > 0.0) {
    // Variance of the sample component along the mean direction.
    const Complex dir = mean / mag;
    double second = 0.0;
    for (const Complex& x : samples) {
      const double proj = (x * std::conj(dir)).real() - mag;
      second += proj * proj;
    }
    stats.std_error = std::sqrt(second / (n_paths - 1) / n_paths);
  }
  return stats;
}

}  // namespace qfreq
