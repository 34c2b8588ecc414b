#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "robustness/robustness.hpp"

namespace testing_support {

using namespace robustness;

inline constexpr double inv_sqrt2 = 0.70710678118654752440;

inline PureState singlet(int n1 = 2, int n2 = 2) {
  ComplexVector v = ComplexVector::Zero(n1 * n2);
  v(0) = inv_sqrt2;
  v(n2 + 1) = inv_sqrt2;
  return PureState(PartyStructure{n1, n2}, v);
}

// (|12> - |21>)/sqrt2
inline PureState antisymmetric_bell() {
  ComplexVector v = ComplexVector::Zero(4);
  v(1) = inv_sqrt2;
  v(2) = -inv_sqrt2;
  return PureState(PartyStructure{2, 2}, v);
}

inline ComplexMatrix diag(std::initializer_list<double> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index k = 0;
  for (double x : d) m(k, k) = x, ++k;
  return m;
}

inline ::testing::AssertionResult matrices_near(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return ::testing::AssertionFailure() << "shape mismatch";
  const double err = (a - b).cwiseAbs().maxCoeff();
  if (err <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "max entry error " << err << " > " << tol;
}

// Naive index-summation partial trace over party B of [n1, n2].
inline ComplexMatrix trace_out_b(const ComplexMatrix& m, int n1, int n2) {
  ComplexMatrix out = ComplexMatrix::Zero(n1, n1);
  for (int i = 0; i < n1; ++i)
    for (int k = 0; k < n1; ++k)
      for (int j = 0; j < n2; ++j) out(i, k) += m(i * n2 + j, k * n2 + j);
  return out;
}

inline ComplexMatrix trace_out_a(const ComplexMatrix& m, int n1, int n2) {
  ComplexMatrix out = ComplexMatrix::Zero(n2, n2);
  for (int j = 0; j < n2; ++j)
    for (int l = 0; l < n2; ++l)
      for (int i = 0; i < n1; ++i) out(j, l) += m(i * n2 + j, i * n2 + l);
  return out;
}

// Mixed state of random rank drawn from the Haar x simplex measure, or a
// random pure state, alternating, to cover both regimes.
inline DensityMatrix random_two_qubit(Rng& rng, long k) {
  const PartyStructure s{2, 2};
  if (k % 4 == 3) return random_pure_state(s, rng).density();
  return sample_state(s, rng);
}

inline double closed_form_R(const PureState& psi) { return pure_robustness(schmidt_decompose(psi)); }

}  // namespace testing_support
