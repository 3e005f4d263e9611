#pragma once

#include <Eigen/Dense>
#include <bit>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace qfreq {

using Complex = std::complex<double>;

// Largest atom count for which full 2^N-space objects may be built. The full
// representation exists as a brute-force oracle; 4^N density-matrix memory
// rules out anything bigger.
inline constexpr int kMaxFullAtoms = 12;

/// Pure probe state in the permutation-symmetric subspace.
/// amplitudes[k] multiplies the Fock state |k, N-k> with k atoms in |0>.
struct SymmetricState {
  int n_atoms = 0;
  Eigen::VectorXcd amplitudes;  // length n_atoms + 1, unit norm

  double norm() const { return amplitudes.norm(); }
};

/// Pure state over the full 2^N computational basis. Bit j of the basis index
/// is the state of atom j, bit value 0 <-> atom state |0>.
struct FullState {
  int n_atoms = 0;
  Eigen::VectorXcd amplitudes;  // length 2^n_atoms, unit norm

  double norm() const { return amplitudes.norm(); }
};

enum class SchemeKind { Conventional, DfsDelta, DfsOmega };

/// Per-atom transition frequencies, noise couplings and laser frequencies for
/// the three interrogation schemes. H_0 and the noise operator
/// L = sum_j eps_j sigma_z^j are both diagonal in the computational basis;
/// only their diagonals are ever needed.
///
///   Conventional: one transition, all atoms coupled equally to the noise
///                 (omega_j = omega, eps_j = +1), rotating frame of omega_L.
///   DfsDelta:     set A at omega_1, set B at omega_2, eps_j = +1 everywhere.
///                 Balanced bit patterns are dark states of L; the frequency
///                 difference delta = omega_1 - omega_2 stays observable.
///   DfsOmega:     set A at omega_1 with eps = -1, set B at omega_2 with
///                 eps = +1; GHZ states are dark, the mean frequency
///                 Omega = (omega_1 + omega_2)/2 stays observable. Rotating
///                 frame of the two lasers.
struct SchemeSpec {
  int n_atoms = 0;
  SchemeKind kind = SchemeKind::Conventional;
  std::vector<double> omegas;           // per-atom transition frequency
  std::vector<int> couplings;           // per-atom noise coupling, +1 or -1
  std::vector<double> laser_freqs;      // {omega_L} or {omega_L1, omega_L2}
  std::vector<std::uint8_t> partition;  // 0 = set A, 1 = set B

  static SchemeSpec conventional(int n_atoms, double omega, double laser_freq);
  // Default partition: atoms with even index in A, odd index in B.
  static SchemeSpec dfs_delta(int n_atoms, double omega1, double omega2,
                              std::vector<std::uint8_t> partition = {});
  static SchemeSpec dfs_omega(int n_atoms, double omega1, double omega2,
                              double laser1, double laser2,
                              std::vector<std::uint8_t> partition = {});

  /// Diagonal value of H_0 (rotating frame where applicable) on basis state
  /// `index`.
  double h0_diagonal(std::uint64_t index) const;

  /// Diagonal value of L = sum_j eps_j sigma_z^j on basis state `index`.
  double noise_diagonal(std::uint64_t index) const;

  /// Throws std::invalid_argument if the per-scheme invariants are violated.
  void validate() const;
};

/// Number of atoms in |0> for a computational basis index, i.e. the
/// excitation sector k of the symmetric Fock basis.
inline int excitation_sector(std::uint64_t index, int n_atoms) {
  return n_atoms - std::popcount(index);
}

/// (|N,0> + |0,N>)/sqrt(2) in the symmetric representation.
SymmetricState ghz_state(int n_atoms);

/// [(|0> + |1>)/sqrt(2)]^(x)N: alpha_k = 2^(-N/2) sqrt(C(N,k)).
SymmetricState product_state(int n_atoms);

/// (|00...0> + |11...1>)/sqrt(2) over the full basis.
FullState ghz_full(int n_atoms);

/// (|pattern> + |complement>)/sqrt(2) for a balanced bit pattern such as
/// "0101". Character j of the pattern is atom j. Rejects patterns whose
/// number of '0's and '1's differ.
FullState dfs_pattern_state(const std::string& pattern);

/// Projects onto the excitation sectors: alpha_k is the norm of the
/// k-sector component. Sector phases are dropped (amplitudes are real and
/// non-negative); the result is normalized.
SymmetricState symmetrize(const FullState& state);

/// Expands a symmetric state over the full basis: amplitude
/// alpha_k / sqrt(C(N,k)) on every index in sector k.
FullState embed_symmetric(const SymmetricState& state);

/// L|psi> for the scheme's noise operator (componentwise, L is diagonal).
FullState apply_noise_operator(const SchemeSpec& scheme, const FullState& state);

}  // namespace qfreq
