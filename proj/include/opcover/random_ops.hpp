#ifndef OPCOVER_RANDOM_OPS_HPP
#define OPCOVER_RANDOM_OPS_HPP

// Random operator instances for Monte Carlo suites and probes.

#include <Eigen/QR>

#include "opcover/operator_core.hpp"
#include "opcover/rng.hpp"

namespace opcover {

inline Matrix random_unitary(Rng& rng, int dim) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Fix column phases with diag(R) so the distribution is Haar.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// Hermitian matrix with Gaussian entries scaled by `scale`.
inline HermitianMatrix random_hermitian(Rng& rng, int dim, double scale = 1.0) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  return HermitianMatrix::from_trusted(scale * 0.5 * (g + g.adjoint()));
}

/// U diag(eigs) U* with a Haar unitary.
inline HermitianMatrix random_with_spectrum(Rng& rng, std::span<const double> eigs) {
  const int dim = static_cast<int>(eigs.size());
  const Matrix u = random_unitary(rng, dim);
  RVector ev(dim);
  for (int i = 0; i < dim; ++i) ev[i] = eigs[i];
  return reassemble({ev, u});
}

/// Random effect 0 <= E <= 1 with eigenvalues uniform in [lo, hi].
inline HermitianMatrix random_effect(Rng& rng, int dim, double lo = 0.0, double hi = 1.0) {
  std::vector<double> ev(dim);
  for (auto& x : ev) x = lo + (hi - lo) * rng.uniform();
  return random_with_spectrum(rng, ev);
}

inline HermitianMatrix random_psd(Rng& rng, int dim, double scale = 1.0) {
  std::vector<double> ev(dim);
  for (auto& x : ev) x = scale * rng.uniform();
  return random_with_spectrum(rng, ev);
}

/// Random state of the given rank (Dirichlet-like spectrum).
inline DensityOperator random_density(Rng& rng, int dim, int rank = -1) {
  if (rank < 0 || rank > dim) rank = dim;
  std::vector<double> ev(dim, 0.0);
  double total = 0.0;
  for (int i = 0; i < rank; ++i) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    ev[i] = -std::log(u);
    total += ev[i];
  }
  for (auto& x : ev) x /= total;
  return DensityOperator(random_with_spectrum(rng, ev));
}

inline HermitianMatrix random_projector(Rng& rng, int dim, int rank) {
  std::vector<double> ev(dim, 0.0);
  for (int i = 0; i < rank; ++i) ev[i] = 1.0;
  return random_with_spectrum(rng, ev);
}

/// Uniform point of the probability simplex.
inline std::vector<double> random_distribution(Rng& rng, std::size_t size) {
  std::vector<double> p(size);
  double total = 0.0;
  for (auto& x : p) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    x = -std::log(u);
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace opcover

#endif  // OPCOVER_RANDOM_OPS_HPP
