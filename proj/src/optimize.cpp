#include "qfreq/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qfreq/dynamics.hpp"
#include "qfreq/rng.hpp"

namespace qfreq {

namespace {

// Fast evaluation path for the optimizer. With real non-negative amplitudes
// and zero detuning the evolved matrix rho_kl = alpha_k alpha_l e^{-gamma t (k-l)^2}
// is real symmetric, so the QFI reduces to a real eigenproblem.
struct QfiObjective {
  int n_atoms;
  double t;
  Eigen::VectorXd gdiag;   // k - N/2
  Eigen::MatrixXd decay;   // e^{-gamma t (k-l)^2}

  QfiObjective(int n, double gamma, double time) : n_atoms(n), t(time) {
    gdiag.resize(n + 1);
    for (int k = 0; k <= n; ++k) gdiag(k) = k - 0.5 * n;
    decay.resize(n + 1, n + 1);
    for (int k = 0; k <= n; ++k)
      for (int l = 0; l <= n; ++l)
        decay(k, l) = std::exp(-gamma * time * (k - l) * (k - l));
  }

  double qfi_of_unit(const Eigen::VectorXd& alpha) const {
    const Eigen::MatrixXd rho = (alpha * alpha.transpose()).cwiseProduct(decay);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(rho);
    const Eigen::VectorXd& p = solver.eigenvalues();
    const Eigen::MatrixXd gt =
        solver.eigenvectors().transpose() * gdiag.asDiagonal() * solver.eigenvectors();
    const double cut = 1e-12 * p.sum();
    double f = 0.0;
    const int dim = n_atoms + 1;
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        const double sum = p(j) + p(k);
        if (sum <= cut) continue;
        const double diff = p(j) - p(k);
        f += diff * diff / sum * gt(j, k) * gt(j, k);
      }
    }
    return 2.0 * t * t * f;
  }

  // Unconstrained parametrization: componentwise |x|, normalized.
  double qfi_of_raw(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd a = x.cwiseAbs();
    const double nrm = a.norm();
    if (nrm == 0.0) return 0.0;
    return qfi_of_unit(a / nrm);
  }
};

struct NmResult {
  Eigen::VectorXd x;
  double value = 0.0;  // maximized objective value
  bool converged = false;
};

// Nelder-Mead ascent on f (standard coefficients, unit-simplex init steps).
NmResult nelder_mead_max(const QfiObjective& obj, const Eigen::VectorXd& x0,
                         double rel_tol, int max_iters) {
  const int dim = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(dim) + 1, x0);
  std::vector<double> vals(static_cast<std::size_t>(dim) + 1);
  for (int i = 1; i <= dim; ++i) pts[static_cast<std::size_t>(i)](i - 1) += 0.3;
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = -obj.qfi_of_raw(pts[i]);

  std::vector<int> order(pts.size());
  bool converged = false;
  for (int iter = 0; iter < max_iters; ++iter) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return vals[static_cast<std::size_t>(a)] < vals[static_cast<std::size_t>(b)]; });
    const int best = order.front();
    const int worst = order.back();
    const int second_worst = order[order.size() - 2];

    if (vals[static_cast<std::size_t>(worst)] - vals[static_cast<std::size_t>(best)] <=
        rel_tol * (std::abs(vals[static_cast<std::size_t>(best)]) + 1e-30)) {
      converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (int i : order)
      if (i != worst) centroid += pts[static_cast<std::size_t>(i)];
    centroid /= dim;

    const Eigen::VectorXd reflected = centroid + (centroid - pts[static_cast<std::size_t>(worst)]);
    const double f_ref = -obj.qfi_of_raw(reflected);
    if (f_ref < vals[static_cast<std::size_t>(best)]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[static_cast<std::size_t>(worst)]);
      const double f_exp = -obj.qfi_of_raw(expanded);
      if (f_exp < f_ref) {
        pts[static_cast<std::size_t>(worst)] = expanded;
        vals[static_cast<std::size_t>(worst)] = f_exp;
      } else {
        pts[static_cast<std::size_t>(worst)] = reflected;
        vals[static_cast<std::size_t>(worst)] = f_ref;
      }
    } else if (f_ref < vals[static_cast<std::size_t>(second_worst)]) {
      pts[static_cast<std::size_t>(worst)] = reflected;
      vals[static_cast<std::size_t>(worst)] = f_ref;
    } else {
      const Eigen::VectorXd contracted = centroid + 0.5 * (pts[static_cast<std::size_t>(worst)] - centroid);
      const double f_con = -obj.qfi_of_raw(contracted);
      if (f_con < vals[static_cast<std::size_t>(worst)]) {
        pts[static_cast<std::size_t>(worst)] = contracted;
        vals[static_cast<std::size_t>(worst)] = f_con;
      } else {
        for (int i : order) {
          if (i == best) continue;
          pts[static_cast<std::size_t>(i)] =
              pts[static_cast<std::size_t>(best)] +
              0.5 * (pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(best)]);
          vals[static_cast<std::size_t>(i)] = -obj.qfi_of_raw(pts[static_cast<std::size_t>(i)]);
        }
      }
    }
  }

  const auto best_it = std::min_element(vals.begin(), vals.end());
  NmResult out;
  out.x = pts[static_cast<std::size_t>(best_it - vals.begin())];
  out.value = -*best_it;
  out.converged = converged;
  return out;
}

Eigen::VectorXd real_amplitudes(const SymmetricState& s) {
  return s.amplitudes.real();
}

SymmetricState state_from_raw(int n_atoms, const Eigen::VectorXd& x) {
  Eigen::VectorXd a = x.cwiseAbs();
  const double nrm = a.norm();
  if (nrm == 0.0) throw std::runtime_error("optimizer produced a zero vector");
  a /= nrm;
  SymmetricState s;
  s.n_atoms = n_atoms;
  s.amplitudes = a.cast<Complex>();
  return s;
}

StateOptimum optimize_impl(int n_atoms, double gamma, double t, const OptimizationConfig& cfg,
                           bool parallel, const std::vector<Eigen::VectorXd>& extra_inits) {
  cfg.validate();
  if (n_atoms < 1) throw std::invalid_argument("optimize_state_at_t: atom count must be >= 1");
  if (!(t > 0.0) || gamma < 0.0)
    throw std::invalid_argument("optimize_state_at_t: need t > 0, gamma >= 0");
  const QfiObjective obj(n_atoms, gamma, t);

  std::vector<Eigen::VectorXd> inits;
  inits.push_back(real_amplitudes(ghz_state(n_atoms)));
  inits.push_back(real_amplitudes(product_state(n_atoms)));
  for (const auto& x : extra_inits) inits.push_back(x);
  const int n_random = std::max(0, cfg.n_restarts - static_cast<int>(inits.size()));
  for (int r = 0; r < n_random; ++r) {
    NormalSampler gauss(cfg.seed + static_cast<std::uint64_t>(r));
    Eigen::VectorXd x(n_atoms + 1);
    for (int k = 0; k <= n_atoms; ++k) x(k) = std::abs(gauss.next());
    inits.push_back(std::move(x));
  }

  std::vector<NmResult> results(inits.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < static_cast<int>(inits.size()); ++i)
    results[static_cast<std::size_t>(i)] =
        nelder_mead_max(obj, inits[static_cast<std::size_t>(i)], cfg.rel_tol, cfg.max_iters);

  std::size_t winner = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].value > results[winner].value) winner = i;

  StateOptimum out;
  out.state = state_from_raw(n_atoms, results[winner].x);
  // Report the value from the public evaluation path.
  out.qfi = qfi_mixed(evolve_symmetric(out.state, 0.0, NoiseParams{gamma, t}),
                      GeneratorSpec::half_sz_sym(n_atoms), t);
  out.converged = results[winner].converged;
  return out;
}

std::vector<double> log_spaced_grid(double lo, double hi, int points) {
  std::vector<double> ts(static_cast<std::size_t>(points));
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < points; ++i)
    ts[static_cast<std::size_t>(i)] =
        std::exp(llo + (lhi - llo) * i / static_cast<double>(points - 1));
  return ts;
}

}  // namespace

void OptimizationConfig::validate() const {
  if (n_restarts < 1 || max_iters < 1 || t_grid_points < 2)
    throw std::invalid_argument("OptimizationConfig: counts must be positive");
  if (!(rel_tol > 0.0) || !(t_refine_rel_width > 0.0))
    throw std::invalid_argument("OptimizationConfig: tolerances must be positive");
  if (!(t_lo_factor > 0.0) || !(t_hi_factor > 0.0))
    throw std::invalid_argument("OptimizationConfig: t-grid factors must be positive");
}

StateOptimum optimize_state_at_t(int n_atoms, double gamma, double t,
                                 const OptimizationConfig& config) {
  return optimize_impl(n_atoms, gamma, t, config, true, {});
}

StateOptimum optimize_state_at_t_serial(int n_atoms, double gamma, double t,
                                        const OptimizationConfig& config) {
  return optimize_impl(n_atoms, gamma, t, config, false, {});
}

PrecisionOptimum optimal_precision(int n_atoms, double gamma, double total_time,
                                   const OptimizationConfig& config) {
  config.validate();
  if (!(gamma > 0.0) || !(total_time > 0.0))
    throw std::invalid_argument("optimal_precision: gamma and T must be positive");
  const double lo = config.t_lo_factor / (2.0 * gamma * n_atoms * n_atoms);
  const double hi = config.t_hi_factor / (2.0 * gamma);
  const std::vector<double> ts = log_spaced_grid(lo, hi, config.t_grid_points);

  PrecisionOptimum best;
  best.delta_min = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const StateOptimum opt = optimize_impl(n_atoms, gamma, ts[i], config, true, {});
    const double delta = cramer_rao(opt.qfi, ts[i], total_time);
    if (delta < best.delta_min) {
      best = PrecisionOptimum{ts[i], opt.state, delta, opt.qfi, opt.converged};
      best_index = i;
    }
  }

  // Golden-section refinement in log t around the best grid point, warm
  // starting each state optimization from the running winner.
  OptimizationConfig refine_cfg = config;
  refine_cfg.n_restarts = 3;  // ghz + product + warm start
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double la = std::log(ts[best_index > 0 ? best_index - 1 : 0]);
  double lb = std::log(ts[std::min(best_index + 1, ts.size() - 1)]);
  auto eval_at = [&](double log_t) {
    const double t = std::exp(log_t);
    const StateOptimum opt = optimize_impl(n_atoms, gamma, t, refine_cfg, true,
                                           {real_amplitudes(best.state)});
    const double delta = cramer_rao(opt.qfi, t, total_time);
    if (delta < best.delta_min)
      best = PrecisionOptimum{t, opt.state, delta, opt.qfi, opt.converged};
    return delta;
  };
  double lc = lb - gr * (lb - la);
  double ld = la + gr * (lb - la);
  double fc = eval_at(lc);
  double fd = eval_at(ld);
  while (lb - la > config.t_refine_rel_width) {
    if (fc < fd) {
      lb = ld;
      ld = lc;
      fd = fc;
      lc = lb - gr * (lb - la);
      fc = eval_at(lc);
    } else {
      la = lc;
      lc = ld;
      fc = fd;
      ld = la + gr * (lb - la);
      fd = eval_at(ld);
    }
  }
  return best;
}

ProductOptimum product_precision_opt(int n_atoms, double gamma, double total_time,
                                     const OptimizationConfig& config) {
  config.validate();
  if (n_atoms < 1) throw std::invalid_argument("product_precision_opt: atom count must be >= 1");
  if (!(gamma > 0.0) || !(total_time > 0.0))
    throw std::invalid_argument("product_precision_opt: gamma and T must be positive");
  const Eigen::VectorXd alpha = real_amplitudes(product_state(n_atoms));
  auto delta_at = [&](double t) {
    const QfiObjective obj(n_atoms, gamma, t);
    return cramer_rao(obj.qfi_of_unit(alpha), t, total_time);
  };

  const double lo = config.t_lo_factor / (2.0 * gamma * n_atoms * n_atoms);
  const double hi = config.t_hi_factor / (2.0 * gamma);
  const std::vector<double> ts = log_spaced_grid(lo, hi, config.t_grid_points);
  std::size_t best_index = 0;
  double best_delta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double d = delta_at(ts[i]);
    if (d < best_delta) {
      best_delta = d;
      best_index = i;
    }
  }

  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double la = std::log(ts[best_index > 0 ? best_index - 1 : 0]);
  double lb = std::log(ts[std::min(best_index + 1, ts.size() - 1)]);
  double lc = lb - gr * (lb - la);
  double ld = la + gr * (lb - la);
  double fc = delta_at(std::exp(lc));
  double fd = delta_at(std::exp(ld));
  while (lb - la > config.t_refine_rel_width) {
    if (fc < fd) {
      lb = ld;
      ld = lc;
      fd = fc;
      lc = lb - gr * (lb - la);
      fc = delta_at(std::exp(lc));
    } else {
      la = lc;
      lc = ld;
      fc = fd;
      ld = la + gr * (lb - la);
      fd = delta_at(std::exp(ld));
    }
  }
  const double t_best = std::exp(0.5 * (la + lb));
  ProductOptimum out;
  const QfiObjective obj(n_atoms, gamma, t_best);
  out.qfi = obj.qfi_of_unit(alpha);
  const double d_final = cramer_rao(out.qfi, t_best, total_time);
  out.t_opt = t_best;
  out.delta_min = std::min(d_final, best_delta);
  if (d_final > best_delta) {
    // Grid point beat the refined point (flat basin); keep the grid solution.
    out.t_opt = ts[best_index];
    const QfiObjective grid_obj(n_atoms, gamma, out.t_opt);
    out.qfi = grid_obj.qfi_of_unit(alpha);
  }
  return out;
}

}  // namespace qfreq
