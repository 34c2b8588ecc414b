#include "support.hpp"

#include <numbers>

using namespace robustness;
using namespace testing_support;

namespace {

SchmidtDecomposition coeffs(std::vector<double> a) {
  SchmidtDecomposition s;
  s.coefficients = std::move(a);
  return s;
}

// Schmidt coefficients of a random pure state on [m, m].
std::vector<double> random_coefficients(int m, Rng& rng) {
  return schmidt_decompose(random_pure_state(PartyStructure{m, m}, rng)).coefficients;
}

ComplexMatrix product_projector(int i, int j, int n1, int n2) {
  ComplexMatrix p = ComplexMatrix::Zero(n1 * n2, n1 * n2);
  p(i * n2 + j, i * n2 + j) = 1.0;
  return p;
}

}  // namespace

// ---------------------------------------------------------------- entropy

TEST(Entropy, ProductState) { EXPECT_EQ(entropy_of_entanglement(coeffs({1.0, 0.0})), 0.0); }

TEST(Entropy, Singlet) { EXPECT_NEAR(entropy_of_entanglement(coeffs({inv_sqrt2, inv_sqrt2})), 1.0, 1e-15); }

TEST(Entropy, UnequalPair) {
  const double oracle = -(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25));
  EXPECT_NEAR(entropy_of_entanglement(coeffs({std::sqrt(3.0) / 2.0, 0.5})), oracle, 1e-15);
  EXPECT_NEAR(oracle, 0.811278, 1e-6);
}

TEST(Entropy, RangeOnRandomStates) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + trial % 3;
    const double e = entropy_of_entanglement(coeffs(random_coefficients(m, rng)));
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, std::log2(m) + 1e-12);
  }
}

// ---------------------------------------------------------------- robustness

TEST(PureRobustness, Singlet) { EXPECT_NEAR(pure_robustness(coeffs({inv_sqrt2, inv_sqrt2})), 1.0, 1e-15); }

TEST(PureRobustness, Product) { EXPECT_EQ(pure_robustness(coeffs({1.0})), 0.0); }

TEST(PureRobustness, MaximallyEntangled) {
  for (int m = 2; m <= 6; ++m) {
    EXPECT_NEAR(pure_robustness(coeffs(std::vector<double>(static_cast<std::size_t>(m), 1.0 / std::sqrt(m)))),
                m - 1.0, 1e-13);
  }
}

TEST(PureRobustness, RangeAndZeroIffProduct) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + trial % 3;
    const double r = pure_robustness(coeffs(random_coefficients(m, rng)));
    EXPECT_GT(r, 0.0);
    EXPECT_LE(r, m - 1.0 + 1e-12);
  }
  EXPECT_EQ(pure_robustness(coeffs({1.0, 0.0, 0.0})), 0.0);
}

TEST(PureRandomRobustness, Singlet) {
  EXPECT_NEAR(pure_random_robustness(schmidt_decompose(singlet()), PartyStructure{2, 2}), 2.0, 1e-14);
}

TEST(PureRandomRobustness, Product) {
  EXPECT_EQ(pure_random_robustness(coeffs({1.0, 0.0}), PartyStructure{2, 2}), 0.0);
}

TEST(PureRandomRobustness, SingletEmbeddedInThreeByThree) {
  EXPECT_NEAR(pure_random_robustness(schmidt_decompose(singlet(3, 3)), PartyStructure{3, 3}), 4.5, 1e-14);
}

TEST(PureRandomRobustness, AtMostHalfDimensionEqualityOnlyForSinglets) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const PartyStructure s = trial % 2 ? PartyStructure{2, 2} : PartyStructure{3, 3};
    const SchmidtDecomposition sd = schmidt_decompose(random_pure_state(s, rng));
    const double rr = pure_random_robustness(sd, s);
    EXPECT_LE(rr, s.total() / 2.0 + 1e-12);
    EXPECT_LT(rr, s.total() / 2.0 - 1e-6);  // generic states are not singlets
  }
  for (int n : {2, 3}) {
    const PartyStructure s{n, n};
    EXPECT_NEAR(pure_random_robustness(schmidt_decompose(singlet(n, n)), s), s.total() / 2.0, 1e-13);
    Rng lu(4);
    const PureState rotated(s, random_local_unitary(s, lu) * singlet(n, n).vector());
    EXPECT_NEAR(pure_random_robustness(schmidt_decompose(rotated), s), s.total() / 2.0, 1e-12);
  }
}

// ---------------------------------------------------------------- optimal pseudomixture construction

TEST(OptimalPseudomixture, TwoQubitMatricesExact) {
  for (double theta : {std::numbers::pi / 4, std::numbers::pi / 6, 0.3, 0.05}) {
    const double a1 = std::cos(theta), a2 = std::sin(theta);
    const PureState psi = schmidt_form_state(PartyStructure{2, 2}, {a1, a2});
    const auto [pm, ens] = build_optimal_pseudomixture_pure(psi);
    const double r = (a1 + a2) * (a1 + a2) - 1.0;
    EXPECT_NEAR(pm.weight, r, 1e-15);

    const ComplexMatrix minus = 0.5 * (product_projector(0, 1, 2, 2) + product_projector(1, 0, 2, 2));
    EXPECT_TRUE(matrices_near(pm.minus.matrix(), minus, 1e-12));

    ComplexMatrix plus = diag({a1 * a1, a1 * a2, a1 * a2, a2 * a2});
    plus(0, 3) = plus(3, 0) = a1 * a2;
    plus /= 1.0 + r;
    EXPECT_TRUE(matrices_near(pm.plus.matrix(), plus, 1e-12));
  }
}

TEST(OptimalPseudomixture, MaximallyEntangledQutritsEnsemble) {
  const double a = 1.0 / std::sqrt(3.0);
  const PureState psi = schmidt_form_state(PartyStructure{3, 3}, {a, a, a});
  const auto [pm, ens] = build_optimal_pseudomixture_pure(psi);
  EXPECT_NEAR(pm.weight, 2.0, 1e-14);
  EXPECT_EQ(ens.alphas, (std::vector<std::int64_t>{0, 1, 3, 7}));
  ASSERT_EQ(ens.vectors.size(), 7u);
  EXPECT_TRUE(matrices_near(ens.mixture(), pm.plus.matrix(), 1e-10));
}

TEST(OptimalPseudomixture, PhaseExponents) {
  const auto a = phase_exponents(8);
  for (std::size_t j = 0; j < a.size(); ++j) EXPECT_EQ(a[j], (std::int64_t{1} << j) - 1);
}

TEST(OptimalPseudomixture, RandomStatesSatisfyInvariants) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const PartyStructure s = trial % 3 == 0 ? PartyStructure{2, 2}
                             : trial % 3 == 1 ? PartyStructure{2, 3}
                                              : PartyStructure{3, 3};
    const PureState psi = random_pure_state(s, rng);
    const auto [pm, ens] = build_optimal_pseudomixture_pure(psi);
    EXPECT_EQ(pm.weight, closed_form_R(psi));
    EXPECT_TRUE(matrices_near(pm.reconstruct(), psi.density().matrix(), 1e-9));
    EXPECT_TRUE(matrices_near(ens.mixture(), pm.plus.matrix(), 1e-10));
    for (const auto& v : ens.vectors) {
      EXPECT_NEAR(largest_schmidt_coefficient(v, s.dim(0), s.dim(1)), 1.0, 1e-10);  // product vectors
    }
    if (ppt_small_dimension(s)) {
      EXPECT_TRUE(is_separable_small(pm.plus).separable);
      EXPECT_TRUE(is_separable_small(pm.minus).separable);
    } else {
      EXPECT_TRUE(is_ppt(pm.plus));
      EXPECT_TRUE(is_ppt(pm.minus));
    }
  }
}

TEST(OptimalPseudomixture, ProductStateRejected) {
  const PureState psi = schmidt_form_state(PartyStructure{2, 2}, {1.0});
  try {
    build_optimal_pseudomixture_pure(psi);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::product_state);
  }
}

TEST(OptimalPseudomixture, WitnessSaturatesOneHalf) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 2 + trial % 3;
    const PureState psi = schmidt_form_state(PartyStructure{m, m}, random_coefficients(m, rng));
    const auto [pm, ens] = build_optimal_pseudomixture_pure(psi);
    const DensityMatrix minus_pt(pm.minus.structure(), transpose_b(pm.minus.matrix(), pm.minus.structure()));
    EXPECT_NEAR(antisymmetric_witness_value(minus_pt), 0.5, 1e-12);
  }
}

// ---------------------------------------------------------------- against the identity

TEST(PseudomixtureVsIdentity, Singlet) {
  const Pseudomixture pm = pure_pseudomixture_vs_identity(singlet());
  EXPECT_NEAR(pm.weight, 2.0, 1e-14);
  EXPECT_TRUE(matrices_near(pm.minus.matrix(), 0.25 * ComplexMatrix::Identity(4, 4), 1e-15));
  EXPECT_TRUE(matrices_near(identity_complement_state(singlet()).matrix(), diag({0.5, 0, 0, 0.5}), 1e-14));
  EXPECT_TRUE(matrices_near(pm.reconstruct(), singlet().density().matrix(), 1e-9));
}

TEST(PseudomixtureVsIdentity, UnequalPair) {
  const PureState psi = schmidt_form_state(PartyStructure{2, 2}, {std::sqrt(0.9), std::sqrt(0.1)});
  const Pseudomixture pm = pure_pseudomixture_vs_identity(psi);
  EXPECT_NEAR(pm.weight, 4.0 * std::sqrt(0.09), 1e-14);
  EXPECT_NEAR(pm.weight, 1.2, 1e-14);
  EXPECT_TRUE(matrices_near(pm.reconstruct(), psi.density().matrix(), 1e-9));
}

TEST(PseudomixtureVsIdentity, ProductRejected) {
  EXPECT_THROW(pure_pseudomixture_vs_identity(schmidt_form_state(PartyStructure{2, 3}, {1.0})), Error);
}

TEST(PseudomixtureVsIdentity, RandomStates) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const PartyStructure s = trial % 2 ? PartyStructure{2, 2} : PartyStructure{2, 3};
    const PureState psi = random_pure_state(s, rng);
    const Pseudomixture pm = pure_pseudomixture_vs_identity(psi);
    const SchmidtDecomposition sd = schmidt_decompose(psi);
    EXPECT_NEAR(pm.weight, pure_random_robustness(sd, s), 1e-12);
    EXPECT_TRUE(matrices_near(pm.minus.matrix(), DensityMatrix::maximally_mixed(s).matrix(), 1e-15));
    EXPECT_TRUE(matrices_near(pm.reconstruct(), psi.density().matrix(), 1e-9));
    EXPECT_TRUE(is_separable_small(pm.plus).separable);
    EXPECT_TRUE(is_separable_small(identity_complement_state(psi)).separable);
  }
}

// ---------------------------------------------------------------- properties

TEST(PureProperties, LocalUnitaryInvariance) {
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const PartyStructure s = trial % 3 == 0 ? PartyStructure{2, 2}
                             : trial % 3 == 1 ? PartyStructure{2, 3}
                                              : PartyStructure{3, 3};
    const PureState psi = random_pure_state(s, rng);
    const PureState rotated(s, random_local_unitary(s, rng) * psi.vector());
    EXPECT_NEAR(closed_form_R(rotated), closed_form_R(psi), 1e-10);
  }
}

TEST(PureProperties, AppendingProductFactorKeepsCoefficients) {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const PureState psi = random_pure_state(PartyStructure{2, 3}, rng);
    const ComplexVector phi = random_pure_state(PartyStructure{2}, rng).vector();
    const ComplexVector chi = random_pure_state(PartyStructure{3}, rng).vector();
    const SchmidtDecomposition base = schmidt_decompose(psi);

    // extra factor on Bob's side, then on Alice's side
    const PureState bob(PartyStructure{2, 6}, kron(psi.vector(), phi));
    const PureState alice(PartyStructure{6, 3}, kron(chi, psi.vector()));
    for (const PureState* ext : {&bob, &alice}) {
      const SchmidtDecomposition sd = schmidt_decompose(*ext);
      for (std::size_t k = 0; k < base.coefficients.size(); ++k) {
        EXPECT_NEAR(sd.coefficients[k], base.coefficients[k], 1e-12);
      }
      for (std::size_t k = base.coefficients.size(); k < sd.coefficients.size(); ++k) {
        EXPECT_NEAR(sd.coefficients[k], 0.0, 1e-12);
      }
      EXPECT_NEAR(pure_robustness(sd), pure_robustness(base), 1e-12);
    }
  }
}

TEST(PureProperties, TensorCompositionWindow) {
  Rng rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const PureState x = random_pure_state(PartyStructure{2, 2}, rng);
    const PureState y = random_pure_state(PartyStructure{2, 3}, rng);
    const double rx = closed_form_R(x), ry = closed_form_R(y);

    // |x>|y> regrouped as (A_x A_y) | (B_x B_y)
    ComplexVector joint(24);
    for (int ax = 0; ax < 2; ++ax)
      for (int bx = 0; bx < 2; ++bx)
        for (int ay = 0; ay < 2; ++ay)
          for (int by = 0; by < 3; ++by)
            joint((ax * 2 + ay) * 6 + (bx * 3 + by)) = x.vector()(ax * 2 + bx) * y.vector()(ay * 3 + by);
    const double rxy = closed_form_R(PureState(PartyStructure{4, 6}, joint));

    EXPECT_NEAR(rxy, (1 + rx) * (1 + ry) - 1, 1e-10);
    EXPECT_GE(rxy, std::max(rx, ry) - 1e-12);
    EXPECT_LE(rxy, rx + ry + 2 * rx * ry + 1e-12);
  }
}
