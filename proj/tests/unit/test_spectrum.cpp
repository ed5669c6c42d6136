#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cocycle/spectrum.hpp"
#include "cocycle/stats.hpp"
#include "support.hpp"

using namespace cocycle;

namespace {

constexpr double kLn2 = std::numbers::ln2;

double pooled(double a, double b) { return std::hypot(a, b); }

Matrix rotation(double angle) {
  Matrix r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

// x_0 = 0 picks diag(2, 1/2), x_0 = 1 the rotation by pi/4.
CocycleGenerator iid_pair() {
  TableSpec t;
  t.dim = 2;
  t.alphabet_size = 2;
  t.window = 0;
  t.grid = 1;
  t.values = {fixtures::diag({2.0, 0.5}), rotation(std::numbers::pi / 4)};
  return CocycleGenerator::table_driven(t);
}

// Independent norm-growth oracle: (1/n) log ||A^n v|| for random unit v over
// freshly drawn i.i.d. symbol sequences, averaged over runs.
MeanStderr norm_growth_oracle(int runs, int n, std::uint64_t seed) {
  const Matrix m[2] = {fixtures::diag({2.0, 0.5}), rotation(std::numbers::pi / 4)};
  std::vector<double> rates;
  for (int r = 0; r < runs; ++r) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(r));
    Vector v(2);
    v << Complex(rng.normal(), rng.normal()), Complex(rng.normal(), rng.normal());
    v.normalize();
    double log_norm = 0.0;
    for (int k = 0; k < n; ++k) {
      v = m[rng.below(2)] * v;
      const double s = v.norm();
      log_norm += std::log(s);
      v /= s;
    }
    rates.push_back(log_norm / n);
  }
  return mean_stderr(rates);
}

}  // namespace

TEST(Spectrum, ExactDiagonal) {
  const auto g = CocycleGenerator::diagonal_constant({2.0, 1.0, 0.5});
  const SkewProduct dyn(fixtures::golden_rotation());
  const auto est = lyapunov_spectrum(g, dyn, fixtures::fair_coin(), 1000, 2, 1);
  EXPECT_TRUE(est.exact);
  EXPECT_NEAR(est.exponents[0], kLn2, 1e-9);
  EXPECT_NEAR(est.exponents[1], 0.0, 1e-9);
  EXPECT_NEAR(est.exponents[2], -kLn2, 1e-9);
}

TEST(Spectrum, QrPathOnDiagonal) {
  const auto g = CocycleGenerator::diagonal_constant({2.0, 1.0, 0.5});
  const SkewProduct dyn(fixtures::golden_rotation());
  SpectrumOptions opts;
  opts.allow_exact = false;
  const auto est = lyapunov_spectrum(g, dyn, fixtures::fair_coin(), 10000, 3, 1, opts);
  EXPECT_FALSE(est.exact);
  const double want[3] = {kLn2, 0.0, -kLn2};
  for (int i = 0; i < 3; ++i) {
    const auto k = static_cast<std::size_t>(i);
    EXPECT_NEAR(est.exponents[k], want[i], 3 * est.stderr_[k]);
  }
}

TEST(Spectrum, IdentityHasZeroSpectrum) {
  const auto g = CocycleGenerator::constant(identity(3));
  const SkewProduct dyn(fixtures::golden_rotation());
  SpectrumOptions opts;
  opts.allow_exact = false;
  const auto est = lyapunov_spectrum(g, dyn, fixtures::fair_coin(), 1000, 2, 1, opts);
  for (double v : est.exponents) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Spectrum, IidPairMatchesNormGrowthOracle) {
  const SkewProduct dyn(fixtures::golden_rotation());
  const auto est = lyapunov_spectrum(iid_pair(), dyn, fixtures::fair_coin(), 100000, 8, 3);
  const auto oracle = norm_growth_oracle(64, 10000, 99);
  EXPECT_GT(est.exponents[0], 0.05);
  EXPECT_NEAR(est.exponents[0], oracle.mean, 3 * pooled(est.stderr_[0], oracle.stderr_));
  // both generators have unit determinant
  EXPECT_NEAR(est.exponents[0] + est.exponents[1], 0.0, 1e-10);
}

TEST(SpectrumProperty, SortedAndSumIsMeanLogDet) {
  const auto ex = fixtures::theorem_c_d3();
  const SkewProduct dyn(fixtures::golden_rotation());
  const MeasureSpec spec = fixtures::fair_coin();
  const auto est = lyapunov_spectrum(ex.gen, dyn, spec, 20000, 4, 5);
  ASSERT_EQ(est.exponents.size(), 3u);
  EXPECT_GE(est.exponents[0], est.exponents[1]);
  EXPECT_GE(est.exponents[1], est.exponents[2]);

  // oracle: average of log|det A| over independent mu-distributed points
  std::vector<double> logdet;
  for (int i = 0; i < 20000; ++i)
    logdet.push_back(std::log(std::abs(ex.gen.evaluate(sample_fibered(spec, 7000 + static_cast<std::uint64_t>(i))).determinant())));
  const auto want = mean_stderr(logdet);
  double sum = 0.0, sum_var = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    sum += est.exponents[i];
    sum_var += est.stderr_[i] * est.stderr_[i];
  }
  EXPECT_NEAR(sum, want.mean, 3 * std::sqrt(sum_var + want.stderr_ * want.stderr_));
}

TEST(SpectrumProperty, TopSumRuleForExteriorPowers) {
  const auto ex = fixtures::theorem_c_d3();
  const SkewProduct dyn(fixtures::golden_rotation());
  const MeasureSpec spec = fixtures::fair_coin();
  const auto base = lyapunov_spectrum(ex.gen, dyn, spec, 20000, 4, 11);
  double partial = 0.0, partial_var = 0.0;
  for (int l = 1; l <= 3; ++l) {
    const auto k = static_cast<std::size_t>(l - 1);
    partial += base.exponents[k];
    partial_var += base.stderr_[k] * base.stderr_[k];
    const auto ext = lyapunov_spectrum(exterior_power(ex.gen, l), dyn, spec, 20000, 4, 11);
    EXPECT_NEAR(ext.exponents[0], partial, 3 * std::sqrt(partial_var + ext.stderr_[0] * ext.stderr_[0]))
        << "l=" << l;
  }
}

TEST(SpectrumProperty, RenormalizationIntervalDoesNotMatter) {
  const auto ex = fixtures::theorem_c_d3();
  const SkewProduct dyn(fixtures::golden_rotation());
  const MeasureSpec spec = fixtures::fair_coin();
  SpectrumOptions o1, o10;
  o1.k_renorm = 1;
  o10.k_renorm = 10;
  const auto a = lyapunov_spectrum(ex.gen, dyn, spec, 10000, 3, 4, o1);
  const auto b = lyapunov_spectrum(ex.gen, dyn, spec, 10000, 3, 4, o10);
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_NEAR(a.exponents[i], b.exponents[i], 3 * pooled(a.stderr_[i], b.stderr_[i]));
}

TEST(SpectrumProperty, DeterministicAcrossThreadCounts) {
  const auto ex = fixtures::theorem_c_d2();
  const SkewProduct dyn(fixtures::golden_rotation());
  SpectrumOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const auto a = lyapunov_spectrum(ex.gen, dyn, fixtures::fair_coin(), 2000, 5, 8, one);
  const auto b = lyapunov_spectrum(ex.gen, dyn, fixtures::fair_coin(), 2000, 5, 8, four);
  EXPECT_EQ(a.exponents, b.exponents);
  EXPECT_EQ(a.stderr_, b.stderr_);
}

TEST(SpectrumProperty, AdjointHasTheSameSpectrum) {
  const auto ex = fixtures::theorem_c_d2();
  const SkewProduct dyn(fixtures::golden_rotation());
  const MeasureSpec spec = fixtures::fair_coin();
  const auto a = lyapunov_spectrum(ex.gen, dyn, spec, 20000, 4, 21);
  const auto b = lyapunov_spectrum(adjoint_cocycle(ex.gen, dyn), dyn.inverse(), spec, 20000, 4, 21);
  for (std::size_t i = 0; i < 2; ++i)
    EXPECT_NEAR(a.exponents[i], b.exponents[i], 3 * pooled(a.stderr_[i], b.stderr_[i]));
}

TEST(Spectrum, OseledetsOfDiagonalAreAxes) {
  const auto g = CocycleGenerator::diagonal_constant({3.0, 1.0, 0.25});
  const SkewProduct dyn(fixtures::golden_rotation());
  const auto split = oseledets_split_on_fiber(g, dyn, make_fixed_point(0), 0.3, 60, 1e-10, true);
  ASSERT_EQ(split.lines.size(), 3u);
  for (int i = 0; i < 3; ++i)
    EXPECT_LT(grass_distance(split.lines[static_cast<std::size_t>(i)], Subspace::coordinate(3, {i})), 1e-12);
  EXPECT_LT(split.defect, 1e-12);
  EXPECT_TRUE(split.converged);
}

TEST(Spectrum, OseledetsOfConjugatedDiagonalAreEigenvectors) {
  Rng rng(5);
  const Matrix s = random_gaussian(3, 3, rng);
  const Matrix a = s * fixtures::diag({2.5, Complex(0.0, 1.2), 0.6}) * s.inverse();
  const SkewProduct dyn(fixtures::golden_rotation());
  const auto split = oseledets_split_on_fiber(CocycleGenerator::constant(a), dyn, make_fixed_point(0), 0.7, 200, 1e-10, true);
  // eigen-decomposition oracle, columns of S ordered by |eigenvalue|
  for (int i = 0; i < 3; ++i)
    EXPECT_LT(grass_distance(split.lines[static_cast<std::size_t>(i)], Subspace::span_of(s.col(i))), 1e-6) << i;
  EXPECT_LT(split.defect, 1e-6);
}

TEST(Spectrum, OseledetsOnBumpExampleFiberIsInvariant) {
  const auto ex = fixtures::theorem_c_d3();
  const SkewProduct dyn(fixtures::golden_rotation());
  const auto split = oseledets_split_on_fiber(ex.gen, dyn, ex.p, 0.45, 400, 1e-10, true);
  EXPECT_LT(split.defect, 1e-6);
  EXPECT_GT(split.min_angle, 1e-8);
}

TEST(Spectrum, RepeatedExponentIsDegenerate) {
  const SkewProduct dyn(fixtures::golden_rotation());
  EXPECT_COCYCLE_ERROR(
      oseledets_split_on_fiber(CocycleGenerator::diagonal_constant({2.0, 2.0, 1.0}), dyn, make_fixed_point(0), 0.1, 100),
      ErrorKind::DegenerateSplit);
}

TEST(Spectrum, EccentricityExamples) {
  for (int l = 1; l <= 2; ++l) {
    const auto e = eccentricity(identity(3), l);
    EXPECT_DOUBLE_EQ(e.value, 1.0);
    EXPECT_FALSE(e.unique);
  }
  const auto e = eccentricity(fixtures::diag({4.0, 2.0, 1.0}), 1);
  EXPECT_NEAR(e.value, 2.0, 1e-14);
  EXPECT_TRUE(e.unique);
  EXPECT_LT(grass_distance(e.most_expanded, Subspace::coordinate(3, {0})), 1e-14);
  Rng rng(8);
  EXPECT_NEAR(eccentricity(random_unitary(4, rng), 2).value, 1.0, 1e-12);
}

TEST(SpectrumProperty, EccentricityIsUnitarilyInvariant) {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix l_mat = random_gaussian(4, 4, rng);
    const Matrix u = random_unitary(4, rng), v = random_unitary(4, rng);
    for (int l = 1; l <= 3; ++l) {
      const double e = eccentricity(l_mat, l).value;
      EXPECT_NEAR(eccentricity(u * l_mat * v, l).value, e, 1e-10 * e);
      // singular-value oracle
      const RealVector sv = Eigen::JacobiSVD<Matrix>(l_mat).singularValues();
      EXPECT_NEAR(e, sv(l - 1) / sv(l), 1e-10 * e);
    }
  }
}

TEST(SpectrumProperty, MostExpandedImagesConverge) {
  const auto ex = fixtures::theorem_c_d3();
  const SkewProduct dyn(fixtures::golden_rotation());
  const FiberedPoint x = sample_fibered(fixtures::fair_coin(), 17);
  auto image = [&](int n) {
    const Matrix l_mat = iterate_matrix(ex.gen, dyn, dyn.iterate(x, -n), n);
    return eccentricity(l_mat, 1).most_expanded.image(l_mat);
  };
  double prev = HUGE_VAL;
  for (int n = 10; n <= 60; n += 10) {
    const double angle = grass_distance(image(n), image(n + 10));
    // monotone until the angle reaches the rounding floor of the SVD
    if (prev > 1e-7) {
      EXPECT_LT(angle, prev) << n;
    }
    prev = angle;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(Spectrum, GapFunctionalOfDiagonal) {
  const auto g = CocycleGenerator::diagonal_constant({2.0, 1.0});
  const SkewProduct dyn(fixtures::golden_rotation());
  const FiberedPoint x{BiSequence::lazy_random(1, {0.5, 0.5}), 0.2};
  const auto e1 = Subspace::coordinate(2, {0}), e2 = Subspace::coordinate(2, {1});
  for (std::int64_t n : {1, 10, 40}) {
    EXPECT_NEAR(log_gap_functional(g, dyn, x, n, e1, e2), 0.5 * static_cast<double>(n) * kLn2, 1e-12);
    EXPECT_NEAR(gap_functional(g, dyn, x, n, e1, e2), std::pow(2.0, 0.5 * static_cast<double>(n)), 1e-9 * std::pow(2.0, 0.5 * static_cast<double>(n)));
  }
  // rate (d_s / d)(lambda_u - lambda_s) = ln2 / 2
  EXPECT_NEAR(log_gap_functional(g, dyn, x, 10000, e1, e2) / 10000, 0.5 * kLn2, 5e-3);
  EXPECT_COCYCLE_ERROR(log_gap_functional(g, dyn, x, 5, e1, e1), ErrorKind::NonTransverse);
}

TEST(Spectrum, InducedOnWholeSpaceIsTheCocycle) {
  const auto ex = fixtures::theorem_c_d2();
  const SkewProduct dyn(fixtures::golden_rotation());
  const FiberedPoint start = sample_fibered(fixtures::fair_coin(), 3);
  const auto ind = induced_cocycle(ex.gen, dyn, whole_space(), start, 200, 50);
  ASSERT_FALSE(ind.return_times.empty());
  for (int r : ind.return_times) EXPECT_EQ(r, 1);
  EXPECT_DOUBLE_EQ(ind.mean_return, 1.0);
  // blocks are the one-step matrices along the orbit after the first visit
  FiberedPoint q = start;
  for (std::size_t i = 0; i < ind.blocks.size(); ++i) {
    EXPECT_LT((ind.blocks[i] - ex.gen.evaluate(q)).norm(), 1e-15) << i;
    q = dyn.step(q);
  }
}

TEST(Spectrum, InducedKacAndRescaling) {
  const auto ex = fixtures::theorem_c_d3();
  const SkewProduct dyn(fixtures::golden_rotation());
  const auto s = induced_statistics(ex.gen, dyn, fixtures::fair_coin(), cylinder_region({0}, 0), 100000, 4, 13);
  // Kac: mean return time = 1 / mu([0;0]) = 2
  EXPECT_NEAR(s.mean_return, 2.0, 0.04);
  EXPECT_NEAR(s.induced_top, s.mean_return * s.original_top,
              3 * pooled(s.induced_stderr, s.mean_return * s.original_stderr));
}

TEST(Spectrum, NoReturns) {
  const auto g = CocycleGenerator::diagonal_constant({2.0, 1.0});
  const SkewProduct dyn(fixtures::golden_rotation());
  const FiberedPoint zeros{BiSequence::constant(0), 0.1};
  EXPECT_COCYCLE_ERROR(induced_cocycle(g, dyn, cylinder_region({1}, 0), zeros, 1000), ErrorKind::NoReturns);
}
