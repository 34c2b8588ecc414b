#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "robustness/types.hpp"

namespace robustness {

struct Eigensystem {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // column k pairs with values[k]
};

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return max_abs(m - m.adjoint());
}

/// Tolerance is relative to the largest entry once that exceeds one.
inline bool is_hermitian(const ComplexMatrix& m, double tolerance = tol::hermitian) {
  return hermiticity_defect(m) <= tolerance * std::max(1.0, max_abs(m));
}

inline Eigensystem hermitian_eigensystem(const ComplexMatrix& m) {
  if (!is_hermitian(m)) {
    throw Error(ErrorKind::not_hermitian,
                "asymmetry " + std::to_string(hermiticity_defect(m)));
  }
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  if (!is_hermitian(m)) {
    throw Error(ErrorKind::not_hermitian,
                "asymmetry " + std::to_string(hermiticity_defect(m)));
  }
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(sym, Eigen::EigenvaluesOnly).eigenvalues();
}

inline double min_eigenvalue(const ComplexMatrix& m) { return hermitian_eigenvalues(m)(0); }

inline bool is_psd(const ComplexMatrix& m, double tolerance = tol::psd) {
  return min_eigenvalue(m) >= -tolerance;
}

/// Strict positive definiteness via Cholesky; no tolerance.
inline bool is_positive_definite(const ComplexMatrix& m) {
  Eigen::LLT<ComplexMatrix> llt(m);
  return llt.info() == Eigen::Success;
}

/// f(m) for Hermitian m, applied on the spectrum.
template <class F>
ComplexMatrix hermitian_function(const ComplexMatrix& m, F&& f) {
  const Eigensystem es = hermitian_eigensystem(m);
  RealVector mapped = es.values;
  for (Eigen::Index k = 0; k < mapped.size(); ++k) mapped(k) = f(es.values(k));
  return es.vectors * mapped.asDiagonal() * es.vectors.adjoint();
}

/// Square root of a PSD matrix; slightly negative eigenvalues are clamped.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  return hermitian_function(m, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

}  // namespace robustness
