#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qfreq/dynamics.hpp"
#include "qfreq/states.hpp"

namespace qfreq {

/// Diagonal generator H_0' = dH_0/dalpha, given by its value on every basis
/// state of the chosen representation ((N+1)-dim symmetric or 2^N-dim full).
struct GeneratorSpec {
  Eigen::VectorXd diag;

  /// n_0 in the symmetric basis: value k on |k, N-k>.
  static GeneratorSpec number_operator(int n_atoms);
  /// Frequency generator dH_0/domega = S_z/2 in the symmetric basis: k - N/2.
  static GeneratorSpec half_sz_sym(int n_atoms);
  /// S_z/2 over the full basis: (N - 2 popcount)/2.
  static GeneratorSpec half_sz_full(int n_atoms);
  /// S_z over the full basis.
  static GeneratorSpec sz_full(int n_atoms);

  void validate(Eigen::Index dim) const;
};

/// Pure-state QFI: F_Q = 4 t^2 (<G^2> - <G>^2).
double qfi_pure(const SymmetricState& state, const GeneratorSpec& gen, double t);
double qfi_pure(const FullState& state, const GeneratorSpec& gen, double t);

/// Mixed-state QFI via the symmetric logarithmic derivative:
///   F_Q = 2 t^2 sum_{j,k} (p_j - p_k)^2 / (p_j + p_k) |<psi_j|G|psi_k>|^2
/// over eigenpairs of rho with p_j + p_k above 1e-12 * trace.
///
/// The eigenproblem runs in double precision. When the result lands below the
/// double noise floor and the matrix carries nonzero entries smaller than
/// 1e-13 * trace (strongly decohered coherences whose eigenvalue splittings
/// round away in double), the computation escalates to a multiprecision
/// Jacobi eigensolver sized to the dynamic range of the entries, keeping the
/// relative accuracy of exponentially small QFI values.
double qfi_mixed(const SymDensityMatrix& rho, const GeneratorSpec& gen, double t);
double qfi_mixed(const FullDensityMatrix& rho, const GeneratorSpec& gen, double t);

/// Cramer-Rao bound 1/sqrt((T/t) F). F = 0 maps to +infinity (unbounded).
double cramer_rao(double fisher, double t, double total_time);

struct GhzOptimum {
  double t_opt;      // 1/(2 gamma N^2)
  double delta_opt;  // sqrt(2 e gamma / T), independent of N
};
GhzOptimum ghz_optimal_precision(int n_atoms, double gamma, double total_time);

/// Classical Fisher information F = sum_k (dp_k/dalpha)^2 / p_k over outcomes
/// with p_k > 1e-12 * sum(p). Rejects negative probabilities and
/// distributions that do not sum to 1 within 1e-10.
double classical_fisher(std::span<const double> probs, std::span<const double> dprobs);

/// Same, with dp/dalpha from central differences of the supplied distribution
/// map, step h = max(1e-6, 1e-6 |alpha|).
double classical_fisher_fd(const std::function<std::vector<double>(double)>& probs_of_alpha,
                           double alpha);

/// Bundle of per-shot information and the resulting bound for reporting.
struct PrecisionResult {
  double fisher = 0.0;   // classical F actually used (equals qfi when optimal)
  double qfi = 0.0;      // quantum Fisher information
  double bound = 0.0;    // 1/sqrt(nu * fisher)
  double t_used = 0.0;
  double nu_used = 0.0;  // repetitions T/t
};

}  // namespace qfreq
