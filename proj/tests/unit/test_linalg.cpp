#include <gtest/gtest.h>

#include "cocycle/linalg.hpp"
#include "cocycle/random.hpp"
#include "cocycle/stats.hpp"
#include "support.hpp"

using namespace cocycle;

TEST(Linalg, BinomialAndCombinations) {
  EXPECT_EQ(binomial(5, 2), 10);
  EXPECT_EQ(binomial(4, 0), 1);
  EXPECT_EQ(binomial(3, 4), 0);
  for (int n = 1; n <= 6; ++n)
    for (int k = 0; k <= n; ++k) {
      const auto c = combinations(n, k);
      EXPECT_EQ(static_cast<long long>(c.size()), binomial(n, k));
      EXPECT_EQ(c, oracle::subsets(n, k));
    }
}

TEST(Linalg, CompoundOfDiagonal) {
  const Matrix a = fixtures::diag({2.0, 3.0, 5.0});
  const Matrix c = compound_matrix(a, 2);
  EXPECT_NEAR(std::abs(c(0, 0) - 6.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c(1, 1) - 10.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c(2, 2) - 15.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c(0, 1)), 0.0, 1e-14);
}

TEST(Linalg, TopCompoundIsDeterminant) {
  Rng rng(3);
  const Matrix a = random_gaussian(4, 4, rng);
  const Matrix c = compound_matrix(a, 4);
  ASSERT_EQ(c.rows(), 1);
  EXPECT_NEAR(std::abs(c(0, 0) - oracle::det(a)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(c(0, 0) - a.determinant()), 0.0, 1e-10);
}

TEST(Linalg, CompoundMatchesMinorExpansion) {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix a = random_gaussian(4, 4, rng);
    for (int k = 1; k <= 4; ++k)
      EXPECT_LT(oracle::rel_error(compound_matrix(a, k), oracle::compound(a, k)), 1e-12);
  }
}

TEST(LinalgProperty, CompoundIsMultiplicative) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_gaussian(4, 4, rng);
    const Matrix b = random_gaussian(4, 4, rng);
    for (int k = 1; k <= 3; ++k)
      EXPECT_LT(oracle::rel_error(compound_matrix(a * b, k), compound_matrix(a, k) * compound_matrix(b, k)), 1e-10);
  }
}

TEST(LinalgProperty, CompoundOfInverse) {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_gaussian(4, 4, rng);
    for (int k = 1; k <= 3; ++k)
      EXPECT_LT(oracle::rel_error(compound_matrix(a.inverse(), k), compound_matrix(a, k).inverse()), 1e-9);
  }
}

TEST(Linalg, AllMinorsEnumerationOrder) {
  Rng rng(5);
  const Matrix a = random_gaussian(3, 3, rng);
  const auto minors = all_minors(a);
  EXPECT_EQ(minors.size(), 9u + 9u + 1u);
  EXPECT_EQ(minors.front().rows.size(), 1u);
  EXPECT_EQ(minors.back().rows.size(), 3u);
  for (const auto& m : minors)
    EXPECT_NEAR(std::abs(m.value - oracle::det(submatrix(a, m.rows, m.cols))), 0.0, 1e-12);
}

TEST(Linalg, NormsAndSingularValues) {
  const Matrix a = fixtures::diag({3.0, -1.0, 0.5});
  EXPECT_DOUBLE_EQ(op_norm(a), 3.0);
  const RealVector s = singular_values(a);
  EXPECT_DOUBLE_EQ(s(0), 3.0);
  EXPECT_DOUBLE_EQ(s(2), 0.5);
  EXPECT_DOUBLE_EQ(condition_number(a), 6.0);
  EXPECT_TRUE(std::isinf(condition_number(fixtures::diag({1.0, 0.0}))));
}

TEST(Linalg, RandomUnitaryIsUnitary) {
  Rng rng(8);
  const Matrix u = random_unitary(4, rng);
  EXPECT_LT((u.adjoint() * u - identity(4)).norm(), 1e-12);
}

TEST(Linalg, QrStepReconstructsVolumes) {
  Rng rng(21);
  const Matrix a = random_gaussian(4, 2, rng);
  const QrStep qr = qr_step(a);
  EXPECT_LT((qr.q.adjoint() * qr.q - identity(2)).norm(), 1e-12);
  // l-volume from the Gram determinant
  const double gram = std::abs(oracle::det(a.adjoint() * a));
  EXPECT_NEAR(qr.log_abs_diag.sum(), 0.5 * std::log(gram), 1e-10);
  EXPECT_NEAR(log_volume(a), 0.5 * std::log(gram), 1e-10);
}

TEST(Linalg, CheckedInverse) {
  const Matrix a = fixtures::diag({2.0, 4.0});
  EXPECT_LT((checked_inverse(a) * a - identity(2)).norm(), 1e-15);
  EXPECT_COCYCLE_ERROR(checked_inverse(fixtures::diag({1.0, 1e-14})), ErrorKind::SingularValue);
}

TEST(Linalg, ScaledMatrixRenormalizeKeepsValue) {
  ScaledMatrix s{fixtures::diag({1e10, 3.0}), 2.0};
  const Matrix before = std::exp(s.log_scale) * s.m;
  s.renormalize();
  EXPECT_NEAR(op_norm(s.m), 1.0, 1e-15);
  EXPECT_LT(oracle::rel_error(std::exp(s.log_scale) * s.m, before), 1e-13);
}

TEST(Stats, CompensatedSumBeatsNaiveSum) {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  double naive = 1.0;
  for (int i = 0; i < 1000; ++i) naive += 1e-16;
  naive -= 1.0;
  EXPECT_NEAR(s.value(), 1e-13, 1e-24);
  EXPECT_GT(std::abs(naive - 1e-13), 1e-15);
}

TEST(Stats, LinearFitRecoversLine) {
  std::vector<double> x, y;
  for (int i = 0; i < 10; ++i) {
    x.push_back(i);
    y.push_back(2.5 * i - 1.0);
  }
  const LineFit f = linear_fit(x, y);
  EXPECT_NEAR(f.slope, 2.5, 1e-12);
  EXPECT_NEAR(f.intercept, -1.0, 1e-12);
}

TEST(Stats, MeanStderr) {
  const MeanStderr m = mean_stderr({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  // sample sd sqrt(5/3), divided by sqrt(4)
  EXPECT_NEAR(m.stderr_, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
}

TEST(Random, StreamsAreReproducible) {
  Rng a = Rng::stream(42, 7), b = Rng::stream(42, 7), c = Rng::stream(42, 8);
  const auto x = a.next();
  EXPECT_EQ(x, b.next());
  EXPECT_NE(x, c.next());
  Rng u(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(LinalgProperty, CompoundDifference) {
  Rng rng(31);
  for (int l = 1; l <= 3; ++l) {
    const Matrix a = random_gaussian(3, 3, rng), delta = random_gaussian(3, 3, rng);
    const Matrix direct = oracle::compound(a + 0.01 * delta, l) - oracle::compound(a, l);
    EXPECT_LT((compound_difference(a, 0.01 * delta, l) - direct).norm(), 1e-13);
    // far below the rounding level of the entries the difference is linear in delta
    const Matrix tiny = compound_difference(a, 1e-30 * delta, l) / 1e-30;
    const Matrix small = compound_difference(a, 1e-9 * delta, l) / 1e-9;
    EXPECT_LT(oracle::rel_error(tiny, small), 1e-7);
  }
}
