#include "qfreq/dfs.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qfreq {

namespace {

void require_even_atoms(int n_atoms) {
  if (n_atoms < 2 || n_atoms % 2 != 0)
    throw std::invalid_argument("DFS schemes need an even atom count >= 2");
}

}  // namespace

double ImperfectionModel::fidelity(int n_atoms) const {
  return xi + (1.0 - xi) * std::pow(2.0, -n_atoms);
}

double ImperfectionModel::visibility(int n_atoms) const {
  return xi * std::pow(eta_h, n_atoms) * std::pow(eta_m, n_atoms);
}

void ImperfectionModel::validate() const {
  const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(xi) || !in_unit(eta_h) || !in_unit(eta_m))
    throw std::invalid_argument("ImperfectionModel: parameters must lie in [0, 1]");
}

double target_scale(Target target) {
  return target == Target::Delta ? 0.5 : 1.0;
}

double target_phase(Target target, double alpha, double t, double laser1, double laser2) {
  if (target == Target::Delta) return 0.5 * alpha * t;
  return (alpha - 0.5 * (laser1 + laser2)) * t;
}

double target_alpha_from_phase(Target target, double phi, double t, double laser1,
                               double laser2) {
  if (!(t > 0.0)) throw std::invalid_argument("target_alpha_from_phase: need t > 0");
  if (target == Target::Delta) return 2.0 * phi / t;
  return phi / t + 0.5 * (laser1 + laser2);
}

double outcome_probability(int n_plus, int n_atoms, const ImperfectionModel& imp, double phi) {
  imp.validate();
  if (n_plus < 0 || n_plus > n_atoms)
    throw std::invalid_argument("outcome_probability: '+' count out of range");
  const double sign = n_plus % 2 == 0 ? 1.0 : -1.0;
  return std::pow(2.0, -n_atoms) *
         (1.0 + sign * imp.visibility(n_atoms) * std::cos(n_atoms * phi));
}

FaultyPovm compose_faulty_povm(double eta_h, double eta_m) {
  ImperfectionModel{1.0, eta_h, eta_m}.validate();
  const double v = eta_h * eta_m;
  Eigen::Matrix2cd plus_proj, minus_proj;
  plus_proj << 0.5, 0.5, 0.5, 0.5;    // |+><+|
  minus_proj << 0.5, -0.5, -0.5, 0.5; // |-><-|
  FaultyPovm povm;
  povm.plus = 0.5 * (1.0 + v) * plus_proj + 0.5 * (1.0 - v) * minus_proj;
  povm.minus = 0.5 * (1.0 - v) * plus_proj + 0.5 * (1.0 + v) * minus_proj;
  return povm;
}

double dfs_fisher(int n_atoms, const ImperfectionModel& imp, double phi, Target target,
                  double t) {
  require_even_atoms(n_atoms);
  imp.validate();
  const double v = imp.visibility(n_atoms);
  const double base = target_scale(target) * n_atoms * t * v;
  if (v == 1.0) return base * base;  // perfect visibility: F is phi-independent
  const double c = std::cos(n_atoms * phi);
  const double s = std::sin(n_atoms * phi);
  return base * base * s * s / (1.0 - v * v * c * c);
}

double dfs_precision_bound(int n_atoms, const ImperfectionModel& imp, double total_time,
                           double t, Target target) {
  require_even_atoms(n_atoms);
  imp.validate();
  if (!(t > 0.0) || total_time < t)
    throw std::invalid_argument("dfs_precision_bound: need total_time >= t > 0");
  const double v = imp.visibility(n_atoms);
  if (v == 0.0) return std::numeric_limits<double>::infinity();
  const double omega_bound = 1.0 / (std::sqrt(total_time * t) * n_atoms * v);
  return target == Target::Delta ? 2.0 * omega_bound : omega_bound;
}

double ramsey_plus_probability(double eta_h, double eta_m, double gamma, double t,
                               double detuning) {
  ImperfectionModel{1.0, eta_h, eta_m}.validate();
  return 0.5 * (1.0 + eta_h * eta_h * eta_m * std::exp(-gamma * t) * std::cos(detuning * t));
}

double ramsey_fisher(int n_atoms, double eta_h, double eta_m, double gamma, double t,
                     double detuning) {
  require_even_atoms(n_atoms);
  const double v = eta_h * eta_h * eta_m * std::exp(-gamma * t);
  const double c = std::cos(detuning * t);
  const double s = std::sin(detuning * t);
  const double base = t * v;
  if (v == 1.0) return 0.5 * n_atoms * base * base;
  return 0.5 * n_atoms * base * base * s * s / (1.0 - v * v * c * c);
}

ClassicalBaseline classical_baseline(int n_atoms, double eta_h, double eta_m, double gamma,
                                     double total_time) {
  require_even_atoms(n_atoms);
  ImperfectionModel{1.0, eta_h, eta_m}.validate();
  if (!(gamma > 0.0) || !(total_time > 0.0))
    throw std::invalid_argument("classical_baseline: gamma and T must be positive");
  ClassicalBaseline out;
  out.t_opt = 1.0 / (2.0 * gamma);
  const double e = std::exp(1.0);
  out.delta_omega1 =
      std::sqrt(4.0 * gamma * e / (n_atoms * total_time)) / (eta_h * eta_h * eta_m);
  out.delta_omega_mean = out.delta_omega1 / std::sqrt(2.0);
  out.delta_delta = 2.0 * out.delta_omega_mean;
  return out;
}

double fidelity_threshold(int n_atoms, double eta_h, double eta_m, double gamma_t) {
  require_even_atoms(n_atoms);
  ImperfectionModel{1.0, eta_h, eta_m}.validate();
  if (!(gamma_t > 0.0)) throw std::invalid_argument("fidelity_threshold: need gamma_t > 0");
  const double e = std::exp(1.0);
  return 1.0 / (std::pow(eta_h, n_atoms - 2) * std::pow(eta_m, n_atoms - 1) *
                std::sqrt(2.0 * n_atoms * gamma_t * e));
}

}  // namespace qfreq
