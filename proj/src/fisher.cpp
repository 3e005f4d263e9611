#include "qfreq/fisher.hpp"

#include <bit>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qfreq/jacobi.hpp"

namespace qfreq {

namespace {

namespace mp = boost::multiprecision;
template <unsigned Digits>
using mp_real = mp::number<mp::cpp_bin_float<Digits>, mp::et_off>;
template <unsigned Digits>
using mp_complex = mp::number<mp::complex_adaptor<mp::cpp_bin_float<Digits>>, mp::et_off>;

constexpr double kEigvalCutRatio = 1e-12;   // pair cutoff, relative to trace
constexpr double kPsdTolerance = -1e-10;    // most negative admissible eigenvalue
constexpr double kNoiseFloorRatio = 1e-14;  // escalation threshold on F / (t gmax)^2 dim
constexpr double kTinyEntryRatio = 1e-13;   // entries below this / trace are sub-double
constexpr int kMaxEscalationDim = 128;

void check_hermitian(const Eigen::MatrixXcd& rho) {
  const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
  const double dev = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-12 * scale)
    throw std::invalid_argument("qfi_mixed: density matrix is not Hermitian");
}

// QFI sum over an eigendecomposition, generic in the scalar type.
template <class RealT, class ComplexT>
RealT qfi_from_eigensystem(const std::vector<RealT>& evals, const std::vector<ComplexT>& vecs,
                           const Eigen::VectorXd& gdiag, int dim, double t, const RealT& cut) {
  // gtilde(j,k) = <psi_j| G |psi_k>, G diagonal.
  std::vector<ComplexT> gtilde(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k <= j; ++k) {
      ComplexT acc(0);
      for (int a = 0; a < dim; ++a) {
        const ComplexT& vj = vecs[static_cast<std::size_t>(a) + static_cast<std::size_t>(dim) * static_cast<std::size_t>(j)];
        const ComplexT& vk = vecs[static_cast<std::size_t>(a) + static_cast<std::size_t>(dim) * static_cast<std::size_t>(k)];
        acc += conj(vj) * RealT(gdiag(a)) * vk;
      }
      gtilde[static_cast<std::size_t>(j) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(k)] = acc;
      gtilde[static_cast<std::size_t>(k) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)] = conj(acc);
    }
  }
  RealT total(0);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      const RealT sum = evals[static_cast<std::size_t>(j)] + evals[static_cast<std::size_t>(k)];
      if (sum <= cut) continue;
      const RealT diff = evals[static_cast<std::size_t>(j)] - evals[static_cast<std::size_t>(k)];
      const ComplexT& g = gtilde[static_cast<std::size_t>(j) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(k)];
      total += diff * diff / sum * norm(g);
    }
  }
  return RealT(2.0 * t * t) * total;
}

template <unsigned Digits>
double qfi_mixed_multiprec(const Eigen::MatrixXcd& rho, const Eigen::VectorXd& gdiag, double t) {
  using C = mp_complex<Digits>;
  using R = mp_real<Digits>;
  const int dim = static_cast<int>(rho.rows());
  std::vector<C> a(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim));
  R trace(0);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c)
      a[static_cast<std::size_t>(r) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(c)] =
          C(R(rho(r, c).real()), R(rho(r, c).imag()));
    trace += R(rho(r, r).real());
  }
  auto eig = jacobi_hermitian<C, R>(std::move(a), dim);
  for (const auto& p : eig.eigenvalues)
    if (p < R(kPsdTolerance))
      throw std::invalid_argument("qfi_mixed: density matrix has a negative eigenvalue");
  const R cut = R(kEigvalCutRatio) * trace;
  return static_cast<double>(
      qfi_from_eigensystem<R, C>(eig.eigenvalues, eig.vectors, gdiag, dim, t, cut));
}

double qfi_mixed_impl(const Eigen::MatrixXcd& rho, const GeneratorSpec& gen, double t) {
  const int dim = static_cast<int>(rho.rows());
  if (rho.cols() != dim) throw std::invalid_argument("qfi_mixed: matrix not square");
  gen.validate(dim);
  check_hermitian(rho);
  const double trace = rho.trace().real();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("qfi_mixed: eigendecomposition failed");
  const Eigen::VectorXd& p = solver.eigenvalues();
  if (p.minCoeff() < kPsdTolerance * std::max(1.0, trace))
    throw std::invalid_argument("qfi_mixed: density matrix has a negative eigenvalue");

  std::vector<double> evals(p.data(), p.data() + dim);
  std::vector<Complex> vecs(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a)
    for (int j = 0; j < dim; ++j)
      vecs[static_cast<std::size_t>(a) + static_cast<std::size_t>(dim) * static_cast<std::size_t>(j)] =
          solver.eigenvectors()(a, j);
  const double cut = kEigvalCutRatio * trace;
  const double f_double = qfi_from_eigensystem<double, Complex>(evals, vecs, gen.diag, dim, t, cut);

  // Escalate only when the value sits below the double noise floor AND the
  // matrix actually contains sub-double-resolution structure.
  const double gmax = gen.diag.cwiseAbs().maxCoeff();
  if (t == 0.0 || gmax == 0.0 || dim > kMaxEscalationDim) return f_double;
  const double noise_floor = kNoiseFloorRatio * t * t * gmax * gmax * dim;
  if (f_double >= noise_floor) return f_double;

  double min_nonzero = std::numeric_limits<double>::infinity();
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      const double m = std::abs(rho(r, c));
      if (m > 0.0 && m < min_nonzero) min_nonzero = m;
    }
  if (!(min_nonzero < kTinyEntryRatio * trace)) return f_double;

  const double span = -std::log10(min_nonzero / trace);
  if (span <= 25.0) return qfi_mixed_multiprec<50>(rho, gen.diag, t);
  if (span <= 75.0) return qfi_mixed_multiprec<100>(rho, gen.diag, t);
  return qfi_mixed_multiprec<200>(rho, gen.diag, t);
}

double qfi_pure_impl(const Eigen::VectorXcd& amps, const GeneratorSpec& gen, double t) {
  gen.validate(amps.size());
  double mean = 0.0, second = 0.0;
  for (Eigen::Index a = 0; a < amps.size(); ++a) {
    const double w = std::norm(amps(a));
    mean += w * gen.diag(a);
    second += w * gen.diag(a) * gen.diag(a);
  }
  return 4.0 * t * t * (second - mean * mean);
}

}  // namespace

GeneratorSpec GeneratorSpec::number_operator(int n_atoms) {
  GeneratorSpec g;
  g.diag.resize(n_atoms + 1);
  for (int k = 0; k <= n_atoms; ++k) g.diag(k) = k;
  return g;
}

GeneratorSpec GeneratorSpec::half_sz_sym(int n_atoms) {
  GeneratorSpec g;
  g.diag.resize(n_atoms + 1);
  for (int k = 0; k <= n_atoms; ++k) g.diag(k) = k - 0.5 * n_atoms;
  return g;
}

GeneratorSpec GeneratorSpec::half_sz_full(int n_atoms) {
  GeneratorSpec g;
  g.diag.resize(std::int64_t{1} << n_atoms);
  for (std::int64_t a = 0; a < g.diag.size(); ++a)
    g.diag(a) = 0.5 * (n_atoms - 2 * std::popcount(static_cast<std::uint64_t>(a)));
  return g;
}

GeneratorSpec GeneratorSpec::sz_full(int n_atoms) {
  GeneratorSpec g = half_sz_full(n_atoms);
  g.diag *= 2.0;
  return g;
}

void GeneratorSpec::validate(Eigen::Index dim) const {
  if (diag.size() != dim)
    throw std::invalid_argument("GeneratorSpec: dimension mismatch with state");
  if (!diag.allFinite())
    throw std::invalid_argument("GeneratorSpec: diagonal values must be finite");
}

double qfi_pure(const SymmetricState& state, const GeneratorSpec& gen, double t) {
  return qfi_pure_impl(state.amplitudes, gen, t);
}

double qfi_pure(const FullState& state, const GeneratorSpec& gen, double t) {
  return qfi_pure_impl(state.amplitudes, gen, t);
}

double qfi_mixed(const SymDensityMatrix& rho, const GeneratorSpec& gen, double t) {
  return qfi_mixed_impl(rho.entries, gen, t);
}

double qfi_mixed(const FullDensityMatrix& rho, const GeneratorSpec& gen, double t) {
  return qfi_mixed_impl(rho.entries, gen, t);
}

double cramer_rao(double fisher, double t, double total_time) {
  if (fisher < 0.0) throw std::invalid_argument("cramer_rao: negative Fisher information");
  if (!(t > 0.0) || total_time < t)
    throw std::invalid_argument("cramer_rao: need total_time >= t > 0");
  if (fisher == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / std::sqrt(total_time / t * fisher);
}

GhzOptimum ghz_optimal_precision(int n_atoms, double gamma, double total_time) {
  if (n_atoms < 1) throw std::invalid_argument("ghz_optimal_precision: atom count must be >= 1");
  if (!(gamma > 0.0) || !(total_time > 0.0))
    throw std::invalid_argument("ghz_optimal_precision: gamma and T must be positive");
  GhzOptimum out;
  out.t_opt = 1.0 / (2.0 * gamma * n_atoms * n_atoms);
  out.delta_opt = std::sqrt(2.0 * std::exp(1.0) * gamma / total_time);
  return out;
}

double classical_fisher(std::span<const double> probs, std::span<const double> dprobs) {
  if (probs.size() != dprobs.size())
    throw std::invalid_argument("classical_fisher: size mismatch");
  double total = 0.0;
  for (const double p : probs) {
    if (p < 0.0) throw std::invalid_argument("classical_fisher: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw std::invalid_argument("classical_fisher: probabilities must sum to 1");
  const double cut = kEigvalCutRatio * total;
  double f = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k)
    if (probs[k] > cut) f += dprobs[k] * dprobs[k] / probs[k];
  return f;
}

double classical_fisher_fd(const std::function<std::vector<double>(double)>& probs_of_alpha,
                           double alpha) {
  const double h = std::max(1e-6, 1e-6 * std::abs(alpha));
  const std::vector<double> p = probs_of_alpha(alpha);
  const std::vector<double> hi = probs_of_alpha(alpha + h);
  const std::vector<double> lo = probs_of_alpha(alpha - h);
  if (hi.size() != p.size() || lo.size() != p.size())
    throw std::invalid_argument("classical_fisher_fd: distribution size changed with alpha");
  std::vector<double> dp(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) dp[k] = (hi[k] - lo[k]) / (2.0 * h);
  return classical_fisher(p, dp);
}

}  // namespace qfreq
