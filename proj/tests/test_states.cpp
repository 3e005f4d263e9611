#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qfreq/rng.hpp"
#include "qfreq/states.hpp"

using namespace qfreq;

namespace {

FullState random_full_state(int n_atoms, std::uint64_t seed) {
  NormalSampler gauss(seed);
  FullState s;
  s.n_atoms = n_atoms;
  s.amplitudes.resize(std::int64_t{1} << n_atoms);
  for (std::int64_t a = 0; a < s.amplitudes.size(); ++a)
    s.amplitudes(a) = Complex(gauss.next(), gauss.next());
  s.amplitudes /= s.amplitudes.norm();
  return s;
}

}  // namespace

TEST_CASE("ghz_state amplitudes") {
  const auto s2 = ghz_state(2);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(s2.amplitudes(0).real() == doctest::Approx(r).epsilon(1e-15));
  CHECK(std::abs(s2.amplitudes(1)) == 0.0);
  CHECK(s2.amplitudes(2).real() == doctest::Approx(r).epsilon(1e-15));

  const auto s1 = ghz_state(1);
  const auto p1 = product_state(1);
  CHECK((s1.amplitudes - p1.amplitudes).norm() < 1e-15);

  CHECK(ghz_state(10).norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(ghz_state(0), std::invalid_argument);
}

TEST_CASE("product_state amplitudes") {
  const auto s = product_state(2);
  CHECK(s.amplitudes(0).real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.amplitudes(1).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(s.amplitudes(2).real() == doctest::Approx(0.5).epsilon(1e-15));

  CHECK(std::abs(product_state(20).norm() - 1.0) < 1e-12);
  CHECK_THROWS_AS(product_state(0), std::invalid_argument);
}

TEST_CASE("dfs_pattern_state builds balanced superpositions") {
  const auto s = dfs_pattern_state("0101");
  // atom j <-> bit j: "0101" has '1' at atoms 1 and 3 -> index 2 + 8 = 10.
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(s.amplitudes(10) - Complex(r, 0)) < 1e-15);
  CHECK(std::abs(s.amplitudes(5) - Complex(r, 0)) < 1e-15);
  CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));

  const auto s2 = dfs_pattern_state("0011");
  CHECK(std::abs(s2.amplitudes(12) - Complex(r, 0)) < 1e-15);
  CHECK(std::abs(s2.amplitudes(3) - Complex(r, 0)) < 1e-15);

  const auto s3 = dfs_pattern_state("01");
  CHECK(s3.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(s3.amplitudes(1) - Complex(r, 0)) < 1e-15);
  CHECK(std::abs(s3.amplitudes(2) - Complex(r, 0)) < 1e-15);

  CHECK_THROWS_AS(dfs_pattern_state("0111"), std::invalid_argument);
  CHECK_THROWS_AS(dfs_pattern_state("011"), std::invalid_argument);
  CHECK_THROWS_AS(dfs_pattern_state("01a1"), std::invalid_argument);
}

TEST_CASE("ghz_full amplitudes and DFS darkness") {
  const auto s = ghz_full(2);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(s.amplitudes(0) - Complex(r, 0)) < 1e-15);
  CHECK(std::abs(s.amplitudes(1)) == 0.0);
  CHECK(std::abs(s.amplitudes(2)) == 0.0);
  CHECK(std::abs(s.amplitudes(3) - Complex(r, 0)) < 1e-15);
  CHECK(ghz_full(3).norm() == doctest::Approx(1.0).epsilon(1e-12));

  // L annihilates the GHZ state in the dfs-omega scheme, exactly.
  const auto scheme = SchemeSpec::dfs_omega(4, 1.3, 0.7, 1.1, 0.5);
  const auto l_psi = apply_noise_operator(scheme, ghz_full(4));
  CHECK(l_psi.norm() == 0.0);
}

TEST_CASE("dfs_pattern_state is dark under the dfs-delta noise operator") {
  const auto scheme = SchemeSpec::dfs_delta(4, 2.0, 1.0);
  const auto l_psi = apply_noise_operator(scheme, dfs_pattern_state("0101"));
  CHECK(l_psi.norm() == 0.0);

  const auto scheme6 = SchemeSpec::dfs_delta(6, 2.0, 1.0, {0, 0, 0, 1, 1, 1});
  const auto l_psi6 = apply_noise_operator(scheme6, dfs_pattern_state("000111"));
  CHECK(l_psi6.norm() == 0.0);
}

TEST_CASE("symmetrize projects onto sector norms") {
  // (|01> + |10>)/sqrt2 lives entirely in the k=1 sector.
  FullState bell;
  bell.n_atoms = 2;
  bell.amplitudes = Eigen::VectorXcd::Zero(4);
  bell.amplitudes(1) = 1.0 / std::sqrt(2.0);
  bell.amplitudes(2) = 1.0 / std::sqrt(2.0);
  const auto sym = symmetrize(bell);
  CHECK(std::abs(sym.amplitudes(0)) < 1e-15);
  CHECK(std::abs(sym.amplitudes(1) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(sym.amplitudes(2)) < 1e-15);

  const auto sym_ghz = symmetrize(ghz_full(3));
  CHECK((sym_ghz.amplitudes - ghz_state(3).amplitudes).norm() < 1e-14);
}

TEST_CASE("symmetrize round-trips through embed_symmetric") {
  for (int n = 1; n <= 8; ++n) {
    NormalSampler gauss(100 + static_cast<std::uint64_t>(n));
    SymmetricState s;
    s.n_atoms = n;
    s.amplitudes.resize(n + 1);
    for (int k = 0; k <= n; ++k) s.amplitudes(k) = std::abs(gauss.next());
    s.amplitudes /= s.amplitudes.norm();

    const auto back = symmetrize(embed_symmetric(s));
    CHECK((back.amplitudes - s.amplitudes).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("random states symmetrize to unit norm") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = symmetrize(random_full_state(3, seed));
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (int k = 0; k <= 3; ++k) {
      CHECK(s.amplitudes(k).imag() == 0.0);
      CHECK(s.amplitudes(k).real() >= 0.0);
    }
  }
}

TEST_CASE("scheme diagonal values") {
  // Conventional: H_0 = (delta/2) S_z, L = S_z.
  const auto conv = SchemeSpec::conventional(3, 1.5, 1.0);
  CHECK(conv.h0_diagonal(0b000) == doctest::Approx(0.75));   // S_z = 3
  CHECK(conv.h0_diagonal(0b111) == doctest::Approx(-0.75));  // S_z = -3
  CHECK(conv.noise_diagonal(0b001) == doctest::Approx(1.0));

  // DfsDelta pattern state: relative phase rate (omega1 - omega2) N/2.
  const auto dfs = SchemeSpec::dfs_delta(4, 2.5, 1.5);
  const double e_pattern = dfs.h0_diagonal(0b1010);  // pattern "0101"
  const double e_complement = dfs.h0_diagonal(0b0101);
  CHECK(e_pattern - e_complement == doctest::Approx((2.5 - 1.5) * 2.0));

  // DfsOmega: phase rate between GHZ branches is N (delta1 + delta2)/2.
  const auto dfso = SchemeSpec::dfs_omega(4, 2.0, 1.0, 1.9, 0.8);
  const double d1 = 2.0 - 1.9, d2 = 1.0 - 0.8;
  CHECK(dfso.h0_diagonal(0b0000) - dfso.h0_diagonal(0b1111) ==
        doctest::Approx(4.0 * (d1 + d2) / 2.0));

  CHECK_THROWS_AS(SchemeSpec::dfs_delta(3, 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(SchemeSpec::dfs_omega(4, 1.0, 2.0, 0.0, 0.0, {0, 0, 0, 1}),
                  std::invalid_argument);
}

TEST_CASE("validate rejects tampered schemes") {
  auto s = SchemeSpec::conventional(2, 1.0, 0.5);
  s.omegas[1] = 2.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);

  auto d = SchemeSpec::dfs_omega(2, 1.0, 2.0, 0.0, 0.0);
  d.couplings[0] = 1;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}
