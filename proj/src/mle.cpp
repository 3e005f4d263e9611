#include "qfreq/mle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qfreq/numeric.hpp"
#include "qfreq/rng.hpp"

namespace qfreq {

namespace {

void require_even_atoms(int n_atoms) {
  if (n_atoms < 2 || n_atoms % 2 != 0)
    throw std::invalid_argument("DFS schemes need an even atom count >= 2");
}

// Binomial pmf over k = 0..n with success probability a, stable in log space.
std::vector<double> binomial_pmf(std::int64_t n, double a) {
  std::vector<double> p(static_cast<std::size_t>(n) + 1, 0.0);
  if (a <= 0.0) {
    p.front() = 1.0;
    return p;
  }
  if (a >= 1.0) {
    p.back() = 1.0;
    return p;
  }
  const std::vector<double> lf = log_factorial_table(n);
  const double la = std::log(a);
  const double lb = std::log1p(-a);
  for (std::int64_t k = 0; k <= n; ++k)
    p[static_cast<std::size_t>(k)] = std::exp(log_choose(lf, n, k) + k * la + (n - k) * lb);
  return p;
}

// phi_est(nu_e) = arccos((2 nu_e - nu)/(nu v))/N; the [-1,1] clamp implements
// the out-of-range branches of the estimator.
std::vector<double> dfs_phase_estimates(std::int64_t nu, int n_atoms, double v) {
  std::vector<double> est(static_cast<std::size_t>(nu) + 1);
  for (std::int64_t k = 0; k <= nu; ++k) {
    const double x = (2.0 * static_cast<double>(k) - static_cast<double>(nu)) /
                     (static_cast<double>(nu) * v);
    est[static_cast<std::size_t>(k)] = std::acos(clamp_to_unit_interval(x)) / n_atoms;
  }
  return est;
}

double mean_over(const std::vector<double>& pmf, const std::vector<double>& values) {
  double m = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) m += pmf[k] * values[k];
  return m;
}

}  // namespace

void ExperimentBudget::validate() const {
  if (nu < 1) throw std::invalid_argument("ExperimentBudget: nu must be >= 1");
  if (!(t > 0.0)) throw std::invalid_argument("ExperimentBudget: t must be positive");
}

double dfs_ml_estimate(std::int64_t nu_even, const ExperimentBudget& budget, int n_atoms,
                       const ImperfectionModel& imp, Target target, double laser1,
                       double laser2) {
  budget.validate();
  require_even_atoms(n_atoms);
  imp.validate();
  if (nu_even < 0 || nu_even > budget.nu)
    throw std::invalid_argument("dfs_ml_estimate: nu_e out of range");
  const double v = imp.visibility(n_atoms);
  if (v == 0.0) throw std::invalid_argument("dfs_ml_estimate: zero visibility");
  const double x = (2.0 * static_cast<double>(nu_even) - static_cast<double>(budget.nu)) /
                   (static_cast<double>(budget.nu) * v);
  const double phi_est = std::acos(clamp_to_unit_interval(x)) / n_atoms;
  return target_alpha_from_phase(target, phi_est, budget.t, laser1, laser2);
}

std::vector<double> nu_e_distribution(std::int64_t nu, int n_atoms,
                                      const ImperfectionModel& imp, double phi) {
  if (nu < 1) throw std::invalid_argument("nu_e_distribution: nu must be >= 1");
  require_even_atoms(n_atoms);
  imp.validate();
  const double a = 0.5 * (1.0 + imp.visibility(n_atoms) * std::cos(n_atoms * phi));
  return binomial_pmf(nu, a);
}

EstimatorResult dfs_uncertainty(const ExperimentBudget& budget, int n_atoms,
                                const ImperfectionModel& imp, Target target,
                                double true_alpha, double laser1, double laser2) {
  budget.validate();
  require_even_atoms(n_atoms);
  imp.validate();
  const double v = imp.visibility(n_atoms);
  if (v == 0.0) throw std::invalid_argument("dfs_uncertainty: zero visibility");

  const std::vector<double> phi_est = dfs_phase_estimates(budget.nu, n_atoms, v);
  std::vector<double> alpha_est(phi_est.size());
  for (std::size_t k = 0; k < phi_est.size(); ++k)
    alpha_est[k] = target_alpha_from_phase(target, phi_est[k], budget.t, laser1, laser2);

  const auto pmf_at = [&](double alpha) {
    return nu_e_distribution(budget.nu, n_atoms,
                             imp, target_phase(target, alpha, budget.t, laser1, laser2));
  };

  // Step in alpha moving N phi by 1e-4 rad.
  const double dphi = 1e-4 / n_atoms;
  const double h = target == Target::Delta ? 2.0 * dphi / budget.t : dphi / budget.t;
  const double mean_hi = mean_over(pmf_at(true_alpha + h), alpha_est);
  const double mean_lo = mean_over(pmf_at(true_alpha - h), alpha_est);
  const double bias = std::abs(mean_hi - mean_lo) / (2.0 * h);
  if (bias < 1e-12)
    throw std::domain_error("dfs_uncertainty: degenerate bias factor");

  const std::vector<double> pmf = pmf_at(true_alpha);
  double second = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    const double dev = alpha_est[k] / bias - true_alpha;
    second += pmf[k] * dev * dev;
  }
  EstimatorResult out;
  out.estimate = mean_over(pmf, alpha_est);
  out.bias_factor = bias;
  out.uncertainty = std::sqrt(second);
  return out;
}

double product_ml_estimate(std::int64_t n_plus, int n_atoms, std::int64_t nu, double eta_h,
                           double eta_m, double gamma, double t, double laser_freq) {
  require_even_atoms(n_atoms);
  ImperfectionModel{1.0, eta_h, eta_m}.validate();
  if (nu < 1 || !(t > 0.0))
    throw std::invalid_argument("product_ml_estimate: need nu >= 1 and t > 0");
  const std::int64_t nu_tilde = static_cast<std::int64_t>(n_atoms) * nu / 2;
  if (n_plus < 0 || n_plus > nu_tilde)
    throw std::invalid_argument("product_ml_estimate: '+' count out of range");
  const double v = eta_h * eta_h * eta_m * std::exp(-gamma * t);
  if (v == 0.0) throw std::invalid_argument("product_ml_estimate: zero visibility");
  const double x = (2.0 * static_cast<double>(n_plus) - static_cast<double>(nu_tilde)) /
                   (static_cast<double>(nu_tilde) * v);
  return std::acos(clamp_to_unit_interval(x)) / t + laser_freq;
}

ProductUncertainty product_uncertainty(int n_atoms, std::int64_t nu, double eta_h,
                                       double eta_m, double gamma, double t) {
  require_even_atoms(n_atoms);
  ImperfectionModel{1.0, eta_h, eta_m}.validate();
  if (nu < 1 || !(t > 0.0))
    throw std::invalid_argument("product_uncertainty: need nu >= 1 and t > 0");
  const std::int64_t nu_tilde = static_cast<std::int64_t>(n_atoms) * nu / 2;
  const double v = eta_h * eta_h * eta_m * std::exp(-gamma * t);
  if (v == 0.0) throw std::invalid_argument("product_uncertainty: zero visibility");

  // Estimator values (lasers at zero) and the operating point eps t = pi/2.
  std::vector<double> est(static_cast<std::size_t>(nu_tilde) + 1);
  for (std::int64_t k = 0; k <= nu_tilde; ++k) {
    const double x = (2.0 * static_cast<double>(k) - static_cast<double>(nu_tilde)) /
                     (static_cast<double>(nu_tilde) * v);
    est[static_cast<std::size_t>(k)] = std::acos(clamp_to_unit_interval(x)) / t;
  }
  const double omega_true = 0.5 * std::numbers::pi / t;
  const auto pmf_at = [&](double omega) {
    return binomial_pmf(nu_tilde, ramsey_plus_probability(eta_h, eta_m, gamma, t, omega));
  };

  const double h = 1e-4 / t;
  const double mean_hi = mean_over(pmf_at(omega_true + h), est);
  const double mean_lo = mean_over(pmf_at(omega_true - h), est);
  const double bias = std::abs(mean_hi - mean_lo) / (2.0 * h);
  if (bias < 1e-12)
    throw std::domain_error("product_uncertainty: degenerate bias factor");

  const std::vector<double> pmf = pmf_at(omega_true);
  double second = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    const double dev = est[k] / bias - omega_true;
    second += pmf[k] * dev * dev;
  }
  ProductUncertainty out;
  out.delta_omega1 = std::sqrt(second);
  // Omega_est = (omega_1,est + omega_2,est)/2 with independent identical errors.
  out.delta_omega_mean = out.delta_omega1 / std::sqrt(2.0);
  out.delta_delta = 2.0 * out.delta_omega_mean;
  out.bias_factor = bias;
  return out;
}

RunSample simulate_runs(const ExperimentBudget& budget, int n_atoms,
                        const ImperfectionModel& imp, double phi, std::uint64_t seed) {
  budget.validate();
  require_even_atoms(n_atoms);
  imp.validate();
  // Per-run distribution of the '+' count: C(N,n) q_n.
  std::vector<double> cdf(static_cast<std::size_t>(n_atoms) + 1);
  double acc = 0.0;
  for (int n = 0; n <= n_atoms; ++n) {
    acc += choose(n_atoms, n) * outcome_probability(n, n_atoms, imp, phi);
    cdf[static_cast<std::size_t>(n)] = acc;
  }

  SplitMix64 rng(seed);
  RunSample sample;
  sample.plus_counts.resize(static_cast<std::size_t>(budget.nu));
  for (std::int64_t j = 0; j < budget.nu; ++j) {
    const double u = rng.next_double() * acc;
    int n = 0;
    while (n < n_atoms && u >= cdf[static_cast<std::size_t>(n)]) ++n;
    sample.plus_counts[static_cast<std::size_t>(j)] = n;
    if (n % 2 == 0) ++sample.nu_even;
  }
  return sample;
}

}  // namespace qfreq
