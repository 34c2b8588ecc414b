#pragma once

#include <cstdint>
#include <random>

#include <Eigen/QR>

#include "robustness/state.hpp"

namespace robustness {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; derives independent stream seeds from (seed, index).
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(split_seed(seed, index));
}

/// Matrix of independent standard complex Gaussians (E|z|^2 = 1).
inline ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  ComplexMatrix z(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) z(r, c) = Complex(g(rng), g(rng));
  return z;
}

/// Haar unitary: QR of a Ginibre matrix with R's diagonal made real-positive.
inline ComplexMatrix haar_unitary(int n, Rng& rng) {
  const ComplexMatrix z = ginibre(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    const double a = std::abs(d);
    if (a > 0) q.col(k) *= d / a;
  }
  return q;
}

/// Uniform point on the probability simplex (normalized unit exponentials).
inline RealVector simplex_point(int n, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  RealVector x(n);
  for (int k = 0; k < n; ++k) x(k) = e(rng);
  return x / x.sum();
}

inline ComplexMatrix random_hermitian(int n, Rng& rng) {
  const ComplexMatrix z = ginibre(n, n, rng);
  return 0.5 * (z + z.adjoint());
}

/// Haar-random pure state.
inline PureState random_pure_state(const PartyStructure& s, Rng& rng) {
  const ComplexMatrix z = ginibre(s.total(), 1, rng);
  return PureState::normalized(s, z.col(0));
}

/// Pure state a_1|11> + ... + a_m|mm> in Schmidt form.
inline PureState schmidt_form_state(const PartyStructure& s, const std::vector<double>& a) {
  ComplexVector v = ComplexVector::Zero(s.total());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int k = static_cast<int>(i);
    v(k * s.dim(1) + k) = a[i];
  }
  return PureState::normalized(s, v);
}

inline PureState random_product_state(const PartyStructure& s, Rng& rng) {
  ComplexVector v = ComplexVector::Ones(1);
  for (int d : s.dims()) {
    ComplexVector f = ginibre(d, 1, rng).col(0);
    f.normalize();
    v = kron(v, f);
  }
  return PureState::normalized(s, v);
}

/// Convex mixture of `terms` random product pure states with random weights.
inline DensityMatrix random_separable_state(const PartyStructure& s, int terms, Rng& rng) {
  const RealVector w = simplex_point(terms, rng);
  ComplexMatrix m = ComplexMatrix::Zero(s.total(), s.total());
  for (int k = 0; k < terms; ++k) {
    const ComplexVector v = random_product_state(s, rng).vector();
    m += w(k) * v * v.adjoint();
  }
  return DensityMatrix::from_unnormalized(s, m);
}

/// Local unitary U_1 (x) ... (x) U_N with Haar factors.
inline ComplexMatrix random_local_unitary(const PartyStructure& s, Rng& rng) {
  ComplexMatrix u = ComplexMatrix::Identity(1, 1);
  for (int d : s.dims()) u = kron(u, haar_unitary(d, rng));
  return u;
}

}  // namespace robustness
