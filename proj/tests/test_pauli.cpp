#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"
#include "tpump/errors.hpp"
#include "tpump/pauli.hpp"

using namespace tpump;
using tpump::testing::kron_oracle;
using tpump::testing::random_string;

TEST(Pauli, SingleSiteProducts) {
  const auto X = PauliString::parse_dense("X"), Y = PauliString::parse_dense("Y"), Z = PauliString::parse_dense("Z");
  EXPECT_EQ(X * Y, PauliString::parse_dense("iZ"));
  EXPECT_EQ(Y * X, PauliString::parse_dense("-iZ"));
  EXPECT_EQ(Z * X, PauliString::parse_dense("iY"));
  EXPECT_EQ(Y * Z, PauliString::parse_dense("iX"));
  EXPECT_EQ(X * X, PauliString::parse_dense("I"));
}

TEST(Pauli, MatrixMatchesKroneckerOracle) {
  std::mt19937_64 gen(1);
  for (int k = 0; k < 50; ++k) {
    const auto s = random_string(gen, 4);
    EXPECT_LT((to_matrix(s) - kron_oracle(s)).cwiseAbs().maxCoeff(), 1e-15) << s.dense_str();
  }
}

TEST(Pauli, SiteZeroIsMostSignificant) {
  const auto m = to_matrix(PauliString::single(3, 0, Pauli::X));
  EXPECT_EQ(m(4, 0), cplx(1.0));  // |000> -> |100>
  const auto z = to_matrix(PauliString::single(3, 2, Pauli::Z));
  EXPECT_EQ(z(1, 1), cplx(-1.0));
}

TEST(Pauli, ProductMatchesMatrixProductOnRandomPairs) {
  std::mt19937_64 gen(2);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto a = random_string(gen, 4), b = random_string(gen, 4);
    worst = std::max(worst, (to_matrix(a * b) - kron_oracle(a) * kron_oracle(b)).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Pauli, CommutationMatchesMatrices) {
  std::mt19937_64 gen(3);
  for (int k = 0; k < 200; ++k) {
    const auto a = random_string(gen, 3), b = random_string(gen, 3);
    const auto A = kron_oracle(a), B = kron_oracle(b);
    EXPECT_EQ(commutes(a, b), (A * B - B * A).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST(Pauli, FromSitesWrapsAndMultiplies) {
  EXPECT_EQ(PauliString::from_sites(3, {{2, Pauli::Z}, {3, Pauli::Z}}).dense_str(), "+ZIZ");
  EXPECT_EQ(PauliString::from_sites(2, {{0, Pauli::Z}, {0, Pauli::X}}), PauliString::parse_dense("iYI"));
}

TEST(Pauli, DenseRoundTrip) {
  std::mt19937_64 gen(4);
  for (int k = 0; k < 50; ++k) {
    const auto s = random_string(gen, 5);
    EXPECT_EQ(PauliString::parse_dense(s.dense_str()), s);
  }
}

TEST(OperatorSum, CanonicalMergesAndDrops) {
  OperatorSum op(2);
  op.add(1.0, PauliString::parse_dense("XZ"));
  op.add(2.0, PauliString::parse_dense("-XZ"));
  op.add(1.0, PauliString::parse_dense("ZZ"));
  op.add(-1.0, PauliString::parse_dense("ZZ"));
  const auto c = op.canonical();
  ASSERT_EQ(c.terms().size(), 1u);
  EXPECT_NEAR(std::abs(c.terms()[0].coeff - cplx(-1.0)), 0.0, 1e-15);
}

TEST(OperatorSum, ProductMatchesMatrices) {
  std::mt19937_64 gen(5);
  OperatorSum a(3), b(3);
  for (int k = 0; k < 5; ++k) {
    a.add(cplx(0.3 * k, -0.1), random_string(gen, 3));
    b.add(cplx(1.0, 0.2 * k), random_string(gen, 3));
  }
  EXPECT_LT((to_matrix(a * b) - to_matrix(a) * to_matrix(b)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(OperatorSum, Hermiticity) {
  OperatorSum h(2);
  h.add(1.0, PauliString::parse_dense("XY"));
  EXPECT_TRUE(h.is_hermitian());
  h.add(cplx(0, 1), PauliString::parse_dense("ZZ"));
  EXPECT_FALSE(h.is_hermitian());
  OperatorSum g(1);
  g.add(1.0, PauliString::parse_dense("iZ"));
  EXPECT_FALSE(g.is_hermitian());
}

TEST(OperatorSum, TextRoundTrip) {
  const auto op = parse_operator_sum("-1 * Z0 X1 Z2 + 0.5 * X3 + 2", 4);
  EXPECT_TRUE(parse_operator_sum(to_string(op), 4).approx_equal(op));
  EXPECT_NEAR(to_matrix(op).trace().real(), 2.0 * 16, 1e-12);
}

TEST(OperatorSum, DenseCapIsEnforced) {
  EXPECT_THROW(to_matrix(PauliString(20)), ResourceError);
}
