#pragma once

#include <cstdint>
#include <vector>

#include "qfreq/dfs.hpp"

namespace qfreq {

/// Repetition budget: nu runs of duration t, total time T = nu t.
struct ExperimentBudget {
  std::int64_t nu = 1;
  double t = 0.0;

  double total_time() const { return static_cast<double>(nu) * t; }
  void validate() const;
};

struct EstimatorResult {
  double estimate = 0.0;     // mean of the estimator at the true parameter
  double bias_factor = 0.0;  // |d<alpha_est>/d alpha|
  double uncertainty = 0.0;  // sqrt(<(alpha_est/bias - alpha)^2>)
};

/// Maximum-likelihood estimate from the even-run count nu_e. With
/// v = xi eta_h^N eta_m^N and nu_pm = nu (1 +- v)/2:
///   phi_est = arccos((2 nu_e - nu)/(nu v))/N on [nu_-, nu_+],
///   clamped to pi/N below nu_- and 0 above nu_+,
/// then mapped back to the target parameter.
double dfs_ml_estimate(std::int64_t nu_even, const ExperimentBudget& budget, int n_atoms,
                       const ImperfectionModel& imp, Target target, double laser1,
                       double laser2);

/// p(nu_e) = C(nu, nu_e) a^nu_e (1-a)^(nu - nu_e), a = (1 + v cos(N phi))/2.
std::vector<double> nu_e_distribution(std::int64_t nu, int n_atoms,
                                      const ImperfectionModel& imp, double phi);

/// Exact estimation uncertainty for finite nu: first and second moments of
/// the clamped estimator over p(nu_e), with the bias factor from central
/// differences of the exact mean (step chosen so N phi moves by 1e-4 rad).
EstimatorResult dfs_uncertainty(const ExperimentBudget& budget, int n_atoms,
                                const ImperfectionModel& imp, Target target,
                                double true_alpha, double laser1, double laser2);

/// Product-state ML estimate of one frequency from n '+' outcomes in
/// nu_tilde = N nu / 2 single-atom runs. With v = eta_h^2 eta_m e^{-gamma t}:
///   omega_est - omega_L = arccos((2n - nu_tilde)/(nu_tilde v))/t,
/// clamped to pi/t and 0 outside [nu_-, nu_+].
double product_ml_estimate(std::int64_t n_plus, int n_atoms, std::int64_t nu, double eta_h,
                           double eta_m, double gamma, double t, double laser_freq);

struct ProductUncertainty {
  double delta_omega1 = 0.0;     // per-frequency uncertainty (Eq.-(1) style)
  double delta_omega_mean = 0.0; // Delta Omega = sqrt(2) / 2 * delta_omega1
  double delta_delta = 0.0;      // 2 * Delta Omega
  double bias_factor = 0.0;
};

/// Exact finite-nu uncertainty of the product-state baseline at the operating
/// point detuning * t = pi/2, combining two independent frequency estimates.
ProductUncertainty product_uncertainty(int n_atoms, std::int64_t nu, double eta_h,
                                       double eta_m, double gamma, double t);

/// One synthetic experiment: nu per-run '+' counts drawn from the exact
/// outcome distribution, plus the even-count statistic nu_e. Deterministic
/// under the seed.
struct RunSample {
  std::vector<int> plus_counts;
  std::int64_t nu_even = 0;
};
RunSample simulate_runs(const ExperimentBudget& budget, int n_atoms,
                        const ImperfectionModel& imp, double phi, std::uint64_t seed);

}  // namespace qfreq
