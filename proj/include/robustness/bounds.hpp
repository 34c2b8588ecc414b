#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "robustness/pure.hpp"
#include "robustness/state.hpp"

namespace robustness {

enum class BoundSource { c1, c2, c3, c3_via_c8, c4, c5, c8, exact };

inline const char* to_string(BoundSource s) {
  switch (s) {
    case BoundSource::c1: return "C1";
    case BoundSource::c2: return "C2";
    case BoundSource::c3: return "C3";
    case BoundSource::c3_via_c8: return "C3_via_C8";
    case BoundSource::c4: return "C4";
    case BoundSource::c5: return "C5";
    case BoundSource::c8: return "C8";
    case BoundSource::exact: return "exact";
  }
  return "unknown";
}

struct SourcedBound {
  double value = 0.0;
  BoundSource source = BoundSource::exact;
};

struct RobustnessInterval {
  double lower = 0.0;
  double upper = 0.0;
  BoundSource lower_source = BoundSource::exact;
  BoundSource upper_source = BoundSource::exact;

  double width() const { return upper - lower; }
  bool contains(double r, double slack = 0.0) const {
    return r >= lower - slack && r <= upper + slack;
  }
};

struct DiagonalFamilyParams {
  double p = 0.0;
  double q1 = 0.0, q2 = 0.0, q3 = 0.0;
  double theta = 0.0;

  void validate() const {
    const double eps = 1e-12;
    if (p < -eps || p > 1 + eps || q1 < -eps || q2 < -eps || q3 < -eps ||
        std::abs(q1 + q2 + q3 - 1.0) > 1e-9 || theta < -eps ||
        theta > std::numbers::pi / 4 + eps) {
      throw Error(ErrorKind::invalid_state, "diagonal family parameters out of range");
    }
  }
};

struct WernerParams {
  double fidelity = 1.0;

  void validate() const {
    if (fidelity < 0.25 - 1e-12 || fidelity > 1.0 + 1e-12) {
      throw Error(ErrorKind::invalid_state, "Werner fidelity must lie in [1/4, 1]");
    }
  }
};

// ---------------------------------------------------------------------------
// Family states

/// |Phi+> = (|11> + |22>)/sqrt(2) on two qubits.
inline ComplexVector bell_phi_plus() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::numbers::sqrt2;
  return v;
}

/// F |Phi+><Phi+| + (1-F)/3 (I - |Phi+><Phi+|).
inline DensityMatrix werner_state(const WernerParams& w) {
  w.validate();
  const ComplexVector phi = bell_phi_plus();
  const ComplexMatrix p = phi * phi.adjoint();
  const ComplexMatrix m =
      w.fidelity * p + (1.0 - w.fidelity) / 3.0 * (ComplexMatrix::Identity(4, 4) - p);
  return DensityMatrix(PartyStructure{2, 2}, m);
}

/// p rho_D + (1-p) |theta><theta| with rho_D = diag(q1, q2/2, q2/2, q3).
inline DensityMatrix diagonal_family_state(const DiagonalFamilyParams& d) {
  d.validate();
  ComplexVector t = ComplexVector::Zero(4);
  t(0) = std::cos(d.theta);
  t(3) = std::sin(d.theta);
  ComplexMatrix m = (1.0 - d.p) * t * t.adjoint();
  m(0, 0) += d.p * d.q1;
  m(1, 1) += d.p * d.q2 / 2;
  m(2, 2) += d.p * d.q2 / 2;
  m(3, 3) += d.p * d.q3;
  return DensityMatrix(PartyStructure{2, 2}, m);
}

// ---------------------------------------------------------------------------
// Bounds

/// max_j |lambda_j| / a_{j,1}^2 over the negative eigenvalues of rho^{T_B}.
inline double lower_bound_C1(const PartialTransposeSpectrum& spectrum) {
  double best = 0.0;
  for (const auto& b : spectrum.negative_branches) {
    best = std::max(best, -b.eigenvalue / (b.max_schmidt * b.max_schmidt));
  }
  return best;
}

inline double lower_bound_C1(const DensityMatrix& rho) {
  return lower_bound_C1(partial_transpose_spectrum(rho));
}

/// Robustness relative to (1/n) I for n <= 6 (exact) or the [n|lambda|, n/2]
/// interval beyond.
inline RobustnessInterval random_robustness_bounds(const DensityMatrix& rho) {
  require_bipartite(rho.structure(), "random_robustness_bounds");
  const double n = double(rho.dim());
  const double lam = min_eigenvalue(transpose_b(rho.matrix(), rho.structure()));
  const double lower = lam >= -tol::psd ? 0.0 : n * -lam;
  if (ppt_small_dimension(rho.structure())) {
    return {lower, lower, BoundSource::exact, BoundSource::exact};
  }
  return {lower, std::max(lower, n / 2.0), BoundSource::c1, BoundSource::c8};
}

/// (1 + n/2)^{N-1} - 1.
inline double random_robustness_nparty_bound(int n, int parties) {
  return std::pow(1.0 + n / 2.0, parties - 1) - 1.0;
}

/// min(m~ - 1, R(rho~ || I~/n~)) computed on the product support of rho.
inline SourcedBound upper_bound_C2_C3(const DensityMatrix& rho) {
  const SupportInfo info = support_info(rho);
  SourcedBound c2{double(info.m_tilde - 1), BoundSource::c2};

  SourcedBound c3;
  if (info.m_tilde <= 1) {
    c3 = {0.0, BoundSource::c3};
  } else {
    const DensityMatrix restricted = info.restrict(rho);
    const RobustnessInterval rr = random_robustness_bounds(restricted);
    c3 = {rr.upper, info.n_tilde <= 6 ? BoundSource::c3 : BoundSource::c3_via_c8};
  }
  return c3.value < c2.value ? c3 : c2;
}

/// Wootters concurrence of a two-qubit state.
inline double concurrence(const DensityMatrix& rho) {
  if (rho.dim() != 4 || !rho.structure().bipartite() || rho.structure().dim(0) != 2) {
    throw Error(ErrorKind::unsupported_dimension, "concurrence needs two qubits");
  }
  // With rho = W W^dagger, the square roots of the eigenvalues of
  // sqrt(rho) rho~ sqrt(rho) are the singular values of W^T (Y x Y) W.
  const Eigensystem es = hermitian_eigensystem(rho.matrix());
  const double cutoff = 1e-14 * std::max(1.0, es.values(3));
  ComplexMatrix w = ComplexMatrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) {
    if (es.values(k) > cutoff) w.col(k) = std::sqrt(es.values(k)) * es.vectors.col(k);
  }
  ComplexMatrix yy = ComplexMatrix::Zero(4, 4);
  yy(0, 3) = yy(3, 0) = -1.0;
  yy(1, 2) = yy(2, 1) = 1.0;
  const ComplexMatrix b = w.transpose() * yy * w;
  const RealVector sv = Eigen::JacobiSVD<ComplexMatrix>(b).singularValues();  // descending
  return std::clamp(sv(0) - sv(1) - sv(2) - sv(3), 0.0, 1.0);
}

/// [|lambda| / cos^2 theta, 2 |lambda|] for an entangled two-qubit state.
inline RobustnessInterval two_qubit_bounds_C4(const DensityMatrix& rho) {
  if (rho.dim() != 4 || !rho.structure().bipartite() || rho.structure().dim(0) != 2) {
    throw Error(ErrorKind::unsupported_dimension, "C4 bounds need two qubits");
  }
  const PartialTransposeSpectrum spec = partial_transpose_spectrum(rho);
  if (spec.negative_branches.empty()) {
    throw Error(ErrorKind::not_entangled, "rho^{T_B} is positive semidefinite");
  }
  const NegativeBranch& b = spec.negative_branches.front();
  const double lam = std::abs(b.eigenvalue);
  const double cos2 = b.max_schmidt * b.max_schmidt;
  const double upper = 2.0 * lam;
  // cos^2 theta = 1/2 collapses the interval to the point 2|lambda|.
  const double lower = std::min(lam / cos2, upper);
  return {lower, upper, BoundSource::c1, BoundSource::c4};
}

/// (1-p) sin 2 theta - p q2 when rho^{T_B} is not PSD, else 0.
inline double diagonal_family_robustness(const DiagonalFamilyParams& d) {
  const DensityMatrix rho = diagonal_family_state(d);
  if (is_separable_small(rho).separable) return 0.0;
  return std::max(0.0, (1.0 - d.p) * std::sin(2.0 * d.theta) - d.p * d.q2);
}

inline double werner_robustness(const WernerParams& w) {
  w.validate();
  return std::max(0.0, 2.0 * w.fidelity - 1.0);
}

/// Tr[rho M] with M the antisymmetric projector sum_{i<j} P_ij = (I - SWAP)/2.
/// Values above 1/2 certify entanglement.
inline double antisymmetric_witness_value(const DensityMatrix& rho) {
  require_bipartite(rho.structure(), "antisymmetric_witness_value");
  const int d = rho.structure().dim(0);
  if (rho.structure().dim(1) != d) {
    throw Error(ErrorKind::unsupported_dimension, "witness needs n1 == n2");
  }
  Complex swap_trace = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) swap_trace += rho.matrix()(i * d + j, j * d + i);
  return 0.5 * (1.0 - swap_trace.real());
}

/// Intersection of every applicable lower and upper bound.
inline RobustnessInterval combined_interval(const DensityMatrix& rho) {
  require_bipartite(rho.structure(), "combined_interval");
  const bool exact_ppt = ppt_small_dimension(rho.structure());
  if (exact_ppt && is_separable_small(rho).separable) {
    return {0.0, 0.0, BoundSource::exact, BoundSource::exact};
  }

  RobustnessInterval out;
  out.lower = lower_bound_C1(rho);
  out.lower_source = BoundSource::c1;
  const SourcedBound up = upper_bound_C2_C3(rho);
  out.upper = up.value;
  out.upper_source = up.source;

  const bool two_qubit = rho.dim() == 4 && rho.structure().dim(0) == 2;
  if (two_qubit) {
    const RobustnessInterval c4 = two_qubit_bounds_C4(rho);
    if (c4.lower > out.lower) {
      out.lower = c4.lower;
      out.lower_source = BoundSource::c4;
    }
    if (c4.upper < out.upper) {
      out.upper = c4.upper;
      out.upper_source = BoundSource::c4;
    }
    const double c = concurrence(rho);
    if (c < out.upper) {
      out.upper = c;
      out.upper_source = BoundSource::c5;
    }
  }
  if (out.lower > out.upper + 1e-9) {
    throw Error(ErrorKind::inconsistent_bounds,
                "lower " + std::to_string(out.lower) + " > upper " + std::to_string(out.upper));
  }
  out.lower = std::min(out.lower, out.upper);
  return out;
}

}  // namespace robustness
