#pragma once

#include <cmath>
#include <optional>

#include "robustness/bounds.hpp"

namespace robustness {

enum class FamilyKind { werner, diagonal_family };

inline const char* to_string(FamilyKind k) {
  return k == FamilyKind::werner ? "werner" : "diagonal_family";
}

struct FamilyMatch {
  FamilyKind kind;
  double robustness;
  WernerParams werner;          // valid when kind == werner
  DiagonalFamilyParams diagonal;  // valid when kind == diagonal_family
};

namespace detail {

inline ComplexMatrix conjugate_by(const ComplexMatrix& rho, const ComplexMatrix& u) {
  return u * rho * u.adjoint();
}

inline ComplexMatrix pauli_x() {
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

/// Rotates a two-qubit X-state with equal |12>,|21> populations and no
/// coherence between them into the frame where <11|rho|22> is real
/// nonnegative and <11|rho|11> >= <22|rho|22>. Returns nothing if no local
/// rotation from {I, X_B} x phases x {I, X_A X_B} produces that shape.
inline std::optional<ComplexMatrix> canonical_x_state(const ComplexMatrix& rho) {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  for (const ComplexMatrix& bob : {id, pauli_x()}) {
    ComplexMatrix m = conjugate_by(rho, kron(id, bob));
    bool x_shape = true;
    for (int r = 0; r < 4 && x_shape; ++r) {
      for (int c = 0; c < 4; ++c) {
        const bool allowed = r == c || (r == 0 && c == 3) || (r == 3 && c == 0);
        if (!allowed && std::abs(m(r, c)) > tol::family_match) {
          x_shape = false;
          break;
        }
      }
    }
    if (!x_shape || std::abs(m(1, 1) - m(2, 2)) > tol::family_match) continue;

    const Complex o = m(0, 3);
    if (std::abs(o) > 0) {
      ComplexMatrix phase = id;
      phase(1, 1) = o / std::abs(o);
      m = conjugate_by(m, kron(phase, id));
    }
    if (m(0, 0).real() < m(3, 3).real()) m = conjugate_by(m, kron(pauli_x(), pauli_x()));
    return m;
  }
  return std::nullopt;
}

}  // namespace detail

/// Exact structural match of a two-qubit state against the Werner family and
/// the p rho_D + (1-p)|theta><theta| family, up to the canonicalizing local
/// rotation. Near misses (beyond tol::family_match) return nothing.
inline std::optional<FamilyMatch> recognize_family(const DensityMatrix& rho) {
  if (rho.dim() != 4 || !rho.structure().bipartite() || rho.structure().dim(0) != 2) {
    return std::nullopt;
  }
  const auto canon = detail::canonical_x_state(rho.matrix());
  if (!canon) return std::nullopt;
  const ComplexMatrix& m = *canon;
  const double d0 = m(0, 0).real(), d1 = m(1, 1).real(), d3 = m(3, 3).real();
  const double o = m(0, 3).real();

  const double fidelity = 0.5 * (d0 + d3) + o;
  if (fidelity >= 0.25 - tol::family_match && fidelity <= 1.0 + tol::family_match) {
    const WernerParams w{std::clamp(fidelity, 0.25, 1.0)};
    if (max_abs(werner_state(w).matrix() - m) <= tol::family_match) {
      return FamilyMatch{FamilyKind::werner, werner_robustness(w), w, {}};
    }
  }

  // o = (1-p) cos sin, pq2 = 2 d1; split d0, d3 between rho_D and the projector.
  DiagonalFamilyParams d;
  const double k = (d0 > 0 && d3 > 0) ? std::min(1.0, o / std::sqrt(d0 * d3)) : 0.0;
  d.theta = (k > 0) ? std::atan(std::sqrt(d3 / d0)) : 0.0;
  d.p = std::clamp(1.0 - k * (d0 + d3), 0.0, 1.0);
  if (d.p > 1e-14) {
    d.q1 = std::max(0.0, d0 * (1 - k)) / d.p;
    d.q2 = std::max(0.0, 2 * d1) / d.p;
    d.q3 = std::max(0.0, d3 * (1 - k)) / d.p;
    const double sum = d.q1 + d.q2 + d.q3;
    d.q1 /= sum;
    d.q2 /= sum;
    d.q3 /= sum;
  } else {
    d.p = 0.0;
    d.q1 = d.q3 = 0.25;
    d.q2 = 0.5;
  }
  try {
    if (max_abs(diagonal_family_state(d).matrix() - m) > tol::family_match) return std::nullopt;
  } catch (const Error&) {
    return std::nullopt;
  }
  return FamilyMatch{FamilyKind::diagonal_family, diagonal_family_robustness(d), {}, d};
}

}  // namespace robustness
