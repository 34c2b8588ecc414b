#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <utility>
#include <vector>

#include "robustness/state.hpp"

namespace robustness {

/// rho = (1 + weight) * plus - weight * minus, with plus and minus separable.
struct Pseudomixture {
  DensityMatrix plus;
  DensityMatrix minus;
  double weight = 0.0;

  ComplexMatrix reconstruct() const {
    return (1.0 + weight) * plus.matrix() - weight * minus.matrix();
  }
};

/// Equal-weight ensemble of product vectors |e_r> (x) |e_r*> whose mixture is
/// the plus part of the optimal pure-state pseudomixture. The vectors carry the
/// (1+R)^{-1/4} factors and are not renormalized.
struct PhaseProductEnsemble {
  std::vector<std::int64_t> alphas;   // alpha_1 .. alpha_{m+1}
  std::vector<ComplexVector> vectors; // alpha_{m+1} product vectors, computational basis

  ComplexMatrix mixture() const {
    const Eigen::Index n = vectors.front().size();
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (const auto& v : vectors) m += v * v.adjoint();
    return m / double(vectors.size());
  }
};

/// alpha_1 = 0, alpha_j = 2 alpha_{j-1} + 1, for j = 1..count.
inline std::vector<std::int64_t> phase_exponents(int count) {
  std::vector<std::int64_t> a{0};
  while (static_cast<int>(a.size()) < count) a.push_back(2 * a.back() + 1);
  return a;
}

/// Entropy of entanglement in bits.
inline double entropy_of_entanglement(const SchmidtDecomposition& s) {
  double e = 0.0;
  for (double a : s.coefficients) {
    const double p = a * a;
    if (p > 0.0) e -= p * std::log2(p);
  }
  return std::max(e, 0.0);
}

/// (sum a_i)^2 - 1.
inline double pure_robustness(const SchmidtDecomposition& s) {
  const double sum = std::accumulate(s.coefficients.begin(), s.coefficients.end(), 0.0);
  return std::max(sum * sum - 1.0, 0.0);
}

/// Robustness relative to the maximally mixed state: n * a_1 * a_2.
inline double pure_random_robustness(const SchmidtDecomposition& s, const PartyStructure& structure) {
  require_bipartite(structure, "pure_random_robustness");
  if (s.coefficients.size() < 2) return 0.0;
  return double(structure.total()) * s.coefficients[0] * s.coefficients[1];
}

namespace detail {

inline ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

inline SchmidtDecomposition entangled_schmidt(const PureState& psi, bool full_bases = false) {
  require_bipartite(psi.structure(), "pure-state pseudomixture");
  auto s = schmidt_decompose(psi.vector(), psi.structure().dim(0), psi.structure().dim(1),
                             full_bases);
  for (double& a : s.coefficients) {
    if (a <= tol::schmidt_zero) a = 0.0;
  }
  if (s.rank() < 2) throw Error(ErrorKind::product_state, "state has Schmidt rank 1");
  return s;
}

/// sum_{i != j} a_i a_j |u_i v_j><u_i v_j|, unnormalized (trace R).
inline ComplexMatrix off_diagonal_products(const SchmidtDecomposition& s) {
  const Eigen::Index n = s.left_basis.rows() * s.right_basis.rows();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  const auto m_terms = static_cast<Eigen::Index>(s.coefficients.size());
  for (Eigen::Index i = 0; i < m_terms; ++i) {
    for (Eigen::Index j = 0; j < m_terms; ++j) {
      if (i == j) continue;
      const double w = s.coefficients[static_cast<std::size_t>(i)] *
                       s.coefficients[static_cast<std::size_t>(j)];
      if (w == 0.0) continue;
      m += w * projector(kron(ComplexVector(s.left_basis.col(i)),
                              ComplexVector(s.right_basis.col(j))));
    }
  }
  return m;
}

}  // namespace detail

/// Optimal local pseudomixture of an entangled pure state together with the
/// phase ensemble that exhibits the plus part as a mixture of product states.
/// Weight is (sum a_i)^2 - 1 exactly.
inline std::pair<Pseudomixture, PhaseProductEnsemble> build_optimal_pseudomixture_pure(
    const PureState& psi) {
  const SchmidtDecomposition s = detail::entangled_schmidt(psi);
  const PartyStructure& st = psi.structure();
  const double r = pure_robustness(s);

  const ComplexMatrix minus = detail::off_diagonal_products(s) / r;
  const ComplexMatrix plus = (detail::projector(psi.vector()) + r * minus) / (1.0 + r);

  const int m = static_cast<int>(s.coefficients.size());
  PhaseProductEnsemble ens;
  ens.alphas = phase_exponents(m + 1);
  const std::int64_t count = ens.alphas.back();
  const double scale = std::pow(1.0 + r, -0.25);
  for (std::int64_t k = 1; k <= count; ++k) {
    ComplexVector left = ComplexVector::Zero(s.left_basis.rows());
    ComplexVector right = ComplexVector::Zero(s.right_basis.rows());
    for (int i = 0; i < m; ++i) {
      const double phase = 2.0 * std::numbers::pi * double(ens.alphas[static_cast<std::size_t>(i)] * k) /
                           double(count);
      const Complex c = scale * std::sqrt(s.coefficients[static_cast<std::size_t>(i)]) *
                        std::polar(1.0, phase);
      left += c * s.left_basis.col(i);
      right += std::conj(c) * s.right_basis.col(i);
    }
    ens.vectors.push_back(kron(left, right));
  }

  Pseudomixture pm{DensityMatrix::from_unnormalized(st, plus),
                   DensityMatrix::from_unnormalized(st, minus), r};
  return {std::move(pm), std::move(ens)};
}

namespace detail {

/// sum_ij c_ij |ij><ij| over full local bases, with c_ij = a1 a2 - a_i a_j for
/// i != j inside the Schmidt block and a1 a2 everywhere else. Trace R_r - R.
inline ComplexMatrix identity_complement(const SchmidtDecomposition& s) {
  const auto n1 = s.left_basis.rows(), n2 = s.right_basis.rows();
  const auto m = static_cast<Eigen::Index>(s.coefficients.size());
  const double a12 = s.coefficients[0] * s.coefficients[1];
  ComplexMatrix out = ComplexMatrix::Zero(n1 * n2, n1 * n2);
  for (Eigen::Index i = 0; i < n1; ++i) {
    for (Eigen::Index j = 0; j < n2; ++j) {
      double c = a12;
      if (i < m && j < m && i != j) {
        c -= s.coefficients[static_cast<std::size_t>(i)] * s.coefficients[static_cast<std::size_t>(j)];
      }
      if (c <= 0.0) continue;
      out += c * projector(kron(ComplexVector(s.left_basis.col(i)),
                                ComplexVector(s.right_basis.col(j))));
    }
  }
  return out;
}

}  // namespace detail

/// Separable complement of the optimal minus part inside (1/n) I, normalized.
inline DensityMatrix identity_complement_state(const PureState& psi) {
  const SchmidtDecomposition s = detail::entangled_schmidt(psi, /*full_bases=*/true);
  return DensityMatrix::from_unnormalized(psi.structure(), detail::identity_complement(s));
}

/// Pseudomixture of a pure state against the maximally mixed state; the
/// weight is n a_1 a_2.
inline Pseudomixture pure_pseudomixture_vs_identity(const PureState& psi) {
  const SchmidtDecomposition s = detail::entangled_schmidt(psi, /*full_bases=*/true);
  const PartyStructure& st = psi.structure();
  const double r = pure_robustness(s);
  const double rr = double(st.total()) * s.coefficients[0] * s.coefficients[1];

  const ComplexMatrix tilde = detail::identity_complement(s) / (rr - r);
  const ComplexMatrix minus_opt = detail::off_diagonal_products(s) / r;
  const ComplexMatrix plus_opt = (detail::projector(psi.vector()) + r * minus_opt) / (1.0 + r);
  const ComplexMatrix plus = ((1.0 + r) * plus_opt + (rr - r) * tilde) / (1.0 + rr);

  return {DensityMatrix::from_unnormalized(st, plus), DensityMatrix::maximally_mixed(st), rr};
}

}  // namespace robustness
