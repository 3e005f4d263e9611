#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qfreq {

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations,
/// templated on the complex scalar so it can run on multiprecision types.
/// qfi_mixed uses this with boost::multiprecision complex scalars when a
/// density matrix carries coherences too small for double eigensolvers to
/// resolve (the eigenvalue gap 2|rho_kl| would round away inside eigenvalues
/// of order one).
///
/// `matrix` is row-major dim x dim; eigenvectors come back column-major:
/// vectors[a + dim*j] is component a of eigenvector j.
template <class ComplexT, class RealT>
struct HermitianEig {
  std::vector<RealT> eigenvalues;
  std::vector<ComplexT> vectors;
};

template <class ComplexT, class RealT>
HermitianEig<ComplexT, RealT> jacobi_hermitian(std::vector<ComplexT> matrix, int dim,
                                               int max_sweeps = 64) {
  using std::abs;
  using std::sqrt;
  if (dim < 1 || matrix.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim))
    throw std::invalid_argument("jacobi_hermitian: bad dimensions");

  const auto at = [&](int r, int c) -> ComplexT& {
    return matrix[static_cast<std::size_t>(r) * static_cast<std::size_t>(dim) +
                  static_cast<std::size_t>(c)];
  };

  std::vector<ComplexT> vecs(matrix.size(), ComplexT(0));
  for (int j = 0; j < dim; ++j) vecs[static_cast<std::size_t>(j) * static_cast<std::size_t>(dim + 1)] = ComplexT(1);
  const auto vat = [&](int r, int c) -> ComplexT& {
    return vecs[static_cast<std::size_t>(r) * static_cast<std::size_t>(dim) +
                static_cast<std::size_t>(c)];
  };

  RealT scale(0);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) scale += abs(at(r, c));
  if (scale == RealT(0)) scale = RealT(1);
  // Stop once every pivot is negligible at working precision.
  const RealT stop = scale * std::numeric_limits<RealT>::epsilon();

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    RealT off(0);
    for (int p = 0; p < dim - 1; ++p)
      for (int q = p + 1; q < dim; ++q) off += abs(at(p, q));
    if (off <= stop) break;

    for (int p = 0; p < dim - 1; ++p) {
      for (int q = p + 1; q < dim; ++q) {
        const RealT apq_abs = abs(at(p, q));
        if (apq_abs == RealT(0)) continue;
        const ComplexT u = at(p, q) / apq_abs;  // phase of the pivot
        const RealT app = at(p, p).real();
        const RealT aqq = at(q, q).real();

        // tan(theta) solving |w| t^2 - (aqq - app) t - |w| = 0, smaller root.
        const RealT tau = (aqq - app) / (2 * apq_abs);
        RealT t;
        if (tau == RealT(0)) {
          t = RealT(1);
        } else {
          const RealT mag = RealT(1) / (abs(tau) + sqrt(RealT(1) + tau * tau));
          t = tau > RealT(0) ? -mag : mag;
        }
        const RealT c = RealT(1) / sqrt(RealT(1) + t * t);
        const RealT s = t * c;
        const ComplexT su = s * u;
        const ComplexT su_conj = s * conj(u);

        for (int r = 0; r < dim; ++r) {
          if (r == p || r == q) continue;
          const ComplexT arp = at(r, p);
          const ComplexT arq = at(r, q);
          at(r, p) = c * arp + su_conj * arq;
          at(r, q) = -su * arp + c * arq;
          at(p, r) = conj(at(r, p));
          at(q, r) = conj(at(r, q));
        }
        at(p, p) = ComplexT(app + t * apq_abs);
        at(q, q) = ComplexT(aqq - t * apq_abs);
        at(p, q) = ComplexT(0);
        at(q, p) = ComplexT(0);

        for (int r = 0; r < dim; ++r) {
          const ComplexT vrp = vat(r, p);
          const ComplexT vrq = vat(r, q);
          vat(r, p) = c * vrp + su_conj * vrq;
          vat(r, q) = -su * vrp + c * vrq;
        }
      }
    }
  }

  HermitianEig<ComplexT, RealT> out;
  out.eigenvalues.resize(static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j) out.eigenvalues[static_cast<std::size_t>(j)] = at(j, j).real();
  out.vectors.resize(vecs.size());
  // Column-major output: vectors[a + dim*j] = V(a, j).
  for (int a = 0; a < dim; ++a)
    for (int j = 0; j < dim; ++j)
      out.vectors[static_cast<std::size_t>(a) + static_cast<std::size_t>(dim) * static_cast<std::size_t>(j)] =
          vat(a, j);
  return out;
}

}  // namespace qfreq
