#pragma once

#include <Eigen/Dense>

#include "qfreq/states.hpp"

namespace qfreq {

/// Preparation, gate and measurement imperfections of the DFS Ramsey schemes.
///   xi:    weight of the ideal pure state in rho_in = xi |psi><psi| + (1-xi) I/2^N
///   eta_h: probability of a perfect pi/2 pulse (per atom)
///   eta_m: probability of a correct per-atom readout
struct ImperfectionModel {
  double xi = 1.0;
  double eta_h = 1.0;
  double eta_m = 1.0;

  /// Preparation fidelity f = xi + (1 - xi)/2^N.
  double fidelity(int n_atoms) const;
  /// Fringe visibility xi eta_h^N eta_m^N entering every outcome formula.
  double visibility(int n_atoms) const;
  void validate() const;
};

/// Which combination of the two transition frequencies is estimated.
///   Delta: delta = omega_1 - omega_2      (phase map delta t / 2)
///   Omega: (omega_1 + omega_2)/2          (phase map [Omega - mean laser] t)
enum class Target { Delta, Omega };

/// Derivative scale c(alpha): 1/2 for Delta, 1 for Omega.
double target_scale(Target target);
/// Ramsey phase phi(alpha) accumulated per run.
double target_phase(Target target, double alpha, double t, double laser1, double laser2);
/// Inverse of target_phase at fixed lasers and t.
double target_alpha_from_phase(Target target, double phi, double t, double laser1,
                               double laser2);

/// Probability q_n = 2^-N (1 + (-1)^n xi eta_h^N eta_m^N cos(N phi)) of one
/// particular outcome sequence containing n '+' results.
double outcome_probability(int n_plus, int n_atoms, const ImperfectionModel& imp, double phi);

/// Per-atom two-outcome POVM of a faulty Hadamard followed by a faulty
/// {|0>,|1>} readout: Pi_pm = (1 +- eta_h eta_m)/2 |pm><pm| + (1 -+ eta_h eta_m)/2 |mp><mp|.
struct FaultyPovm {
  Eigen::Matrix2cd plus;
  Eigen::Matrix2cd minus;
};
FaultyPovm compose_faulty_povm(double eta_h, double eta_m);

/// Closed-form Fisher information of the DFS schemes,
///   F = (c N t v)^2 sin^2(N phi) / (1 - v^2 cos^2(N phi)),  v = xi eta_h^N eta_m^N.
double dfs_fisher(int n_atoms, const ImperfectionModel& imp, double phi, Target target,
                  double t);

/// Cramer-Rao bound at the optimal operating point N phi = pi/2:
///   Delta Omega_min = 1/(sqrt(T t) N v), Delta delta_min twice that.
double dfs_precision_bound(int n_atoms, const ImperfectionModel& imp, double total_time,
                           double t, Target target);

/// P_+ of a single faulty Ramsey readout under uncorrelated dephasing:
///   (1 + eta_h^2 eta_m e^{-gamma t} cos(detuning t))/2.
double ramsey_plus_probability(double eta_h, double eta_m, double gamma, double t,
                               double detuning);

/// Fisher information per run of the conventional product-state scheme, using
/// N/2 atoms for one frequency (uncorrelated dephasing).
double ramsey_fisher(int n_atoms, double eta_h, double eta_m, double gamma, double t,
                     double detuning);

/// Conventional product-state baseline at its optimal time t = 1/(2 gamma).
struct ClassicalBaseline {
  double t_opt = 0.0;
  double delta_omega1 = 0.0;     // = delta_omega2
  double delta_omega_mean = 0.0; // Delta Omega
  double delta_delta = 0.0;      // Delta delta = 2 Delta Omega
};
ClassicalBaseline classical_baseline(int n_atoms, double eta_h, double eta_m, double gamma,
                                     double total_time);

/// Minimum preparation fidelity for which the DFS schemes beat the
/// conventional baseline: xi_min = 1/(eta_h^{N-2} eta_m^{N-1} sqrt(2 N gamma_t e)).
double fidelity_threshold(int n_atoms, double eta_h, double eta_m, double gamma_t);

}  // namespace qfreq
