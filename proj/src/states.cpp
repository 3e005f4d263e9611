#include "qfreq/states.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "qfreq/numeric.hpp"

namespace qfreq {

namespace {

void require_atoms(int n_atoms, int max_atoms) {
  if (n_atoms < 1) throw std::invalid_argument("atom count must be >= 1");
  if (n_atoms > max_atoms)
    throw std::invalid_argument("atom count exceeds full-representation cap");
}

std::vector<std::uint8_t> default_partition(int n_atoms) {
  std::vector<std::uint8_t> part(static_cast<std::size_t>(n_atoms));
  for (int j = 0; j < n_atoms; ++j) part[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(j % 2);
  return part;
}

void require_balanced(const std::vector<std::uint8_t>& partition) {
  std::size_t in_b = 0;
  for (auto p : partition) in_b += p;
  if (2 * in_b != partition.size())
    throw std::invalid_argument("partition must split the atoms evenly");
}

}  // namespace

SchemeSpec SchemeSpec::conventional(int n_atoms, double omega, double laser_freq) {
  if (n_atoms < 1) throw std::invalid_argument("atom count must be >= 1");
  SchemeSpec s;
  s.n_atoms = n_atoms;
  s.kind = SchemeKind::Conventional;
  s.omegas.assign(static_cast<std::size_t>(n_atoms), omega);
  s.couplings.assign(static_cast<std::size_t>(n_atoms), 1);
  s.laser_freqs = {laser_freq};
  s.partition.assign(static_cast<std::size_t>(n_atoms), 0);
  return s;
}

SchemeSpec SchemeSpec::dfs_delta(int n_atoms, double omega1, double omega2,
                                 std::vector<std::uint8_t> partition) {
  if (n_atoms < 2 || n_atoms % 2 != 0)
    throw std::invalid_argument("DFS schemes need an even atom count >= 2");
  if (partition.empty()) partition = default_partition(n_atoms);
  if (partition.size() != static_cast<std::size_t>(n_atoms))
    throw std::invalid_argument("partition size mismatch");
  require_balanced(partition);
  SchemeSpec s;
  s.n_atoms = n_atoms;
  s.kind = SchemeKind::DfsDelta;
  s.omegas.resize(static_cast<std::size_t>(n_atoms));
  for (int j = 0; j < n_atoms; ++j)
    s.omegas[static_cast<std::size_t>(j)] = partition[static_cast<std::size_t>(j)] ? omega2 : omega1;
  s.couplings.assign(static_cast<std::size_t>(n_atoms), 1);
  s.laser_freqs = {};
  s.partition = std::move(partition);
  return s;
}

SchemeSpec SchemeSpec::dfs_omega(int n_atoms, double omega1, double omega2,
                                 double laser1, double laser2,
                                 std::vector<std::uint8_t> partition) {
  if (n_atoms < 2 || n_atoms % 2 != 0)
    throw std::invalid_argument("DFS schemes need an even atom count >= 2");
  if (partition.empty()) partition = default_partition(n_atoms);
  if (partition.size() != static_cast<std::size_t>(n_atoms))
    throw std::invalid_argument("partition size mismatch");
  require_balanced(partition);
  SchemeSpec s;
  s.n_atoms = n_atoms;
  s.kind = SchemeKind::DfsOmega;
  s.omegas.resize(static_cast<std::size_t>(n_atoms));
  s.couplings.resize(static_cast<std::size_t>(n_atoms));
  for (int j = 0; j < n_atoms; ++j) {
    const bool in_b = partition[static_cast<std::size_t>(j)] != 0;
    s.omegas[static_cast<std::size_t>(j)] = in_b ? omega2 : omega1;
    s.couplings[static_cast<std::size_t>(j)] = in_b ? 1 : -1;
  }
  s.laser_freqs = {laser1, laser2};
  s.partition = std::move(partition);
  return s;
}

double SchemeSpec::h0_diagonal(std::uint64_t index) const {
  double e = 0.0;
  for (int j = 0; j < n_atoms; ++j) {
    const double sz = (index >> j) & 1u ? -1.0 : 1.0;
    double detuning = omegas[static_cast<std::size_t>(j)];
    switch (kind) {
      case SchemeKind::Conventional:
        detuning -= laser_freqs[0];
        break;
      case SchemeKind::DfsDelta:
        break;  // lab frame
      case SchemeKind::DfsOmega:
        detuning -= laser_freqs[partition[static_cast<std::size_t>(j)] ? 1 : 0];
        break;
    }
    e += 0.5 * detuning * sz;
  }
  return e;
}

double SchemeSpec::noise_diagonal(std::uint64_t index) const {
  double l = 0.0;
  for (int j = 0; j < n_atoms; ++j) {
    const double sz = (index >> j) & 1u ? -1.0 : 1.0;
    l += static_cast<double>(couplings[static_cast<std::size_t>(j)]) * sz;
  }
  return l;
}

void SchemeSpec::validate() const {
  const auto n = static_cast<std::size_t>(n_atoms);
  if (n_atoms < 1 || omegas.size() != n || couplings.size() != n || partition.size() != n)
    throw std::invalid_argument("SchemeSpec: inconsistent sizes");
  switch (kind) {
    case SchemeKind::Conventional:
      if (laser_freqs.size() != 1) throw std::invalid_argument("SchemeSpec: need one laser");
      for (std::size_t j = 0; j < n; ++j)
        if (omegas[j] != omegas[0] || couplings[j] != 1)
          throw std::invalid_argument("SchemeSpec: conventional scheme needs equal omegas, unit couplings");
      break;
    case SchemeKind::DfsDelta:
      require_balanced(partition);
      for (std::size_t j = 0; j < n; ++j)
        if (couplings[j] != 1) throw std::invalid_argument("SchemeSpec: DfsDelta needs unit couplings");
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
          if (partition[i] == partition[j] && omegas[i] != omegas[j])
            throw std::invalid_argument("SchemeSpec: omegas must be constant within each set");
      break;
    case SchemeKind::DfsOmega:
      require_balanced(partition);
      if (laser_freqs.size() != 2) throw std::invalid_argument("SchemeSpec: need two lasers");
      for (std::size_t j = 0; j < n; ++j) {
        if (couplings[j] != (partition[j] ? 1 : -1))
          throw std::invalid_argument("SchemeSpec: DfsOmega needs couplings -1 on A, +1 on B");
        for (std::size_t i = 0; i < n; ++i)
          if (partition[i] == partition[j] && omegas[i] != omegas[j])
            throw std::invalid_argument("SchemeSpec: omegas must be constant within each set");
      }
      break;
  }
}

SymmetricState ghz_state(int n_atoms) {
  if (n_atoms < 1) throw std::invalid_argument("ghz_state: atom count must be >= 1");
  SymmetricState s;
  s.n_atoms = n_atoms;
  s.amplitudes = Eigen::VectorXcd::Zero(n_atoms + 1);
  const double r = 1.0 / std::sqrt(2.0);
  s.amplitudes(0) = r;
  s.amplitudes(n_atoms) = r;
  return s;
}

SymmetricState product_state(int n_atoms) {
  if (n_atoms < 1) throw std::invalid_argument("product_state: atom count must be >= 1");
  SymmetricState s;
  s.n_atoms = n_atoms;
  s.amplitudes = Eigen::VectorXcd::Zero(n_atoms + 1);
  const double scale = std::pow(2.0, -0.5 * n_atoms);
  for (int k = 0; k <= n_atoms; ++k)
    s.amplitudes(k) = scale * std::sqrt(choose(n_atoms, k));
  return s;
}

FullState ghz_full(int n_atoms) {
  require_atoms(n_atoms, kMaxFullAtoms);
  FullState s;
  s.n_atoms = n_atoms;
  s.amplitudes = Eigen::VectorXcd::Zero(std::int64_t{1} << n_atoms);
  const double r = 1.0 / std::sqrt(2.0);
  s.amplitudes(0) = r;
  s.amplitudes((std::int64_t{1} << n_atoms) - 1) = r;
  return s;
}

FullState dfs_pattern_state(const std::string& pattern) {
  const int n_atoms = static_cast<int>(pattern.size());
  require_atoms(n_atoms, kMaxFullAtoms);
  if (n_atoms % 2 != 0)
    throw std::invalid_argument("dfs_pattern_state: pattern length must be even");
  std::uint64_t index = 0;
  int ones = 0;
  for (int j = 0; j < n_atoms; ++j) {
    const char c = pattern[static_cast<std::size_t>(j)];
    if (c == '1') {
      index |= std::uint64_t{1} << j;
      ++ones;
    } else if (c != '0') {
      throw std::invalid_argument("dfs_pattern_state: pattern must be 0s and 1s");
    }
  }
  if (2 * ones != n_atoms)
    throw std::invalid_argument("dfs_pattern_state: pattern must be balanced");
  const std::uint64_t complement = ~index & ((std::uint64_t{1} << n_atoms) - 1);
  FullState s;
  s.n_atoms = n_atoms;
  s.amplitudes = Eigen::VectorXcd::Zero(std::int64_t{1} << n_atoms);
  const double r = 1.0 / std::sqrt(2.0);
  s.amplitudes(static_cast<std::int64_t>(index)) = r;
  s.amplitudes(static_cast<std::int64_t>(complement)) = r;
  return s;
}

SymmetricState symmetrize(const FullState& state) {
  SymmetricState out;
  out.n_atoms = state.n_atoms;
  Eigen::VectorXd sector_power = Eigen::VectorXd::Zero(state.n_atoms + 1);
  for (std::int64_t a = 0; a < state.amplitudes.size(); ++a) {
    const int k = excitation_sector(static_cast<std::uint64_t>(a), state.n_atoms);
    sector_power(k) += std::norm(state.amplitudes(a));
  }
  out.amplitudes = sector_power.cwiseSqrt().cast<Complex>();
  const double nrm = out.amplitudes.norm();
  if (nrm == 0.0) throw std::invalid_argument("symmetrize: zero state");
  out.amplitudes /= nrm;
  return out;
}

FullState embed_symmetric(const SymmetricState& state) {
  require_atoms(state.n_atoms, kMaxFullAtoms);
  FullState out;
  out.n_atoms = state.n_atoms;
  out.amplitudes.resize(std::int64_t{1} << state.n_atoms);
  for (std::int64_t a = 0; a < out.amplitudes.size(); ++a) {
    const int k = excitation_sector(static_cast<std::uint64_t>(a), state.n_atoms);
    out.amplitudes(a) = state.amplitudes(k) / std::sqrt(choose(state.n_atoms, k));
  }
  return out;
}

FullState apply_noise_operator(const SchemeSpec& scheme, const FullState& state) {
  if (scheme.n_atoms != state.n_atoms)
    throw std::invalid_argument("apply_noise_operator: atom count mismatch");
  FullState out = state;
  for (std::int64_t a = 0; a < out.amplitudes.size(); ++a)
    out.amplitudes(a) *= scheme.noise_diagonal(static_cast<std::uint64_t>(a));
  return out;
}

}  // namespace qfreq
