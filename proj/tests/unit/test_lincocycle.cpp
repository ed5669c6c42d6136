#include <gtest/gtest.h>

#include "cocycle/lincocycle.hpp"
#include "support.hpp"

using namespace cocycle;

namespace {

FiberMapFamily perturbed_w1() {
  std::vector<double> angles;
  for (int i = 0; i < 8; ++i) angles.push_back(0.05 + 0.113 * i);
  return FiberMapFamily::perturbed_rotation(2, 1, angles, 0.08);
}

CocycleGenerator bump_with_sin() {
  const auto z = make_homoclinic({1}, 0);
  BumpSpec b;
  b.base = fixtures::diag({1.4, Complex(0.9, 0.3), 0.7});
  b.r = fixtures::theorem_c_r3();
  b.r_sin = 0.3 * fixtures::theorem_c_r3().transpose();
  b.center = z.point;
  b.radius = 0.6;
  return CocycleGenerator::bump_perturbed(b);
}

}  // namespace

TEST(Lincocycle, ConstantEvaluatesToItself) {
  Rng rng(1);
  const Matrix a = random_gaussian(3, 3, rng);
  const auto g = CocycleGenerator::constant(a);
  EXPECT_EQ(g.kind(), CocycleGenerator::Kind::Constant);
  EXPECT_EQ((g.evaluate(BiSequence::lazy_random(2, {0.5, 0.5}), 0.7) - a).norm(), 0.0);
  EXPECT_COCYCLE_ERROR(CocycleGenerator::constant(fixtures::diag({1.0, 0.0})), ErrorKind::SingularValue);
}

TEST(Lincocycle, BumpValues) {
  const auto ex = fixtures::theorem_c_d3();
  const Matrix a = fixtures::diag({1.4, 1.1, 0.8});
  // outside the ball the base matrix is returned exactly
  const auto far = BiSequence::exact({0}, {1, 1}, {0}, -1);
  ASSERT_GE(dist_sigma(far, ex.z.point), 0.3);
  EXPECT_EQ((ex.gen.evaluate(far, 0.2) - a).norm(), 0.0);
  EXPECT_EQ(bump_weight(far, ex.z.point, 0.3, 1.0), 0.0);
  // at the centre psi = 1
  const Matrix at_z = ex.gen.evaluate(ex.z.point, 0.2);
  EXPECT_LT((at_z - a * (identity(3) + fixtures::theorem_c_r3())).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(bump_weight(ex.z.point, ex.z.point, 0.3, 1.0), 1.0);
  // a point at distance 2^-5 from the centre
  const auto near = BiSequence::splice(ex.z.point, BiSequence::exact({0}, {1}, {0}, 5), 5);
  EXPECT_NEAR(bump_weight(near, ex.z.point, 0.3, 1.0), 1.0 - std::ldexp(1.0, -5) / 0.3, 1e-15);
}

TEST(Lincocycle, IterateExamples) {
  Rng rng(2);
  const Matrix a = random_gaussian(3, 3, rng);
  const auto g = CocycleGenerator::constant(a);
  const SkewProduct dyn(fixtures::golden_rotation());
  const FiberedPoint p{BiSequence::lazy_random(3, {0.5, 0.5}), 0.1};
  EXPECT_EQ((iterate_matrix(g, dyn, p, 0) - identity(3)).norm(), 0.0);
  EXPECT_LT(oracle::rel_error(iterate_matrix(g, dyn, p, 3), a * a * a), 1e-14);
}

TEST(LincocycleProperty, BackwardIterateInvertsForward) {
  const auto g = bump_with_sin();
  const SkewProduct dyn(perturbed_w1());
  for (std::uint64_t s = 0; s < 20; ++s) {
    const FiberedPoint p{BiSequence::lazy_random(50 + s, {0.5, 0.5}), 0.03 * static_cast<double>(s)};
    const int n = 1 + static_cast<int>(s % 9);
    // brute force: multiply the one-step matrices along the backward orbit
    Matrix fwd = identity(3);
    FiberedPoint q = dyn.iterate(p, -n);
    for (int k = 0; k < n; ++k) {
      fwd = g.evaluate(q) * fwd;
      q = dyn.step(q);
    }
    const Matrix back = iterate_matrix(g, dyn, p, -n);
    EXPECT_LT((back * fwd - identity(3)).norm(), 1e-10);
  }
}

TEST(LincocycleProperty, CocycleLaw) {
  // A^{m+n}(p) = A^m(f^n p) A^n(p); relative error against ||A^m|| ||A^n||
  const auto g = bump_with_sin();
  const SkewProduct dyn(perturbed_w1());
  Rng rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const FiberedPoint p{BiSequence::lazy_random(rng.next(), {0.5, 0.5}), rng.uniform()};
    const auto m = static_cast<std::int64_t>(rng.below(41)) - 20;
    const auto n = static_cast<std::int64_t>(rng.below(41)) - 20;
    const Matrix am = iterate_matrix(g, dyn, dyn.iterate(p, n), m);
    const Matrix an = iterate_matrix(g, dyn, p, n);
    const Matrix amn = iterate_matrix(g, dyn, p, m + n);
    EXPECT_LT((amn - am * an).norm() / (op_norm(am) * op_norm(an)), 1e-10) << "m=" << m << " n=" << n;
  }
}

TEST(Lincocycle, RenormalizedIterateKeepsValue) {
  const auto g = bump_with_sin();
  const SkewProduct dyn(perturbed_w1());
  const FiberedPoint p{BiSequence::lazy_random(7, {0.5, 0.5}), 0.3};
  const ScaledMatrix s = iterate(g, dyn, p, 60, true);
  EXPECT_LT(oracle::rel_error(std::exp(s.log_scale) * s.m, iterate_matrix(g, dyn, p, 60)), 1e-12);
}

TEST(Lincocycle, ExteriorPowerIsCompound) {
  const auto g = bump_with_sin();
  const auto x = BiSequence::lazy_random(8, {0.5, 0.5});
  const auto z = make_homoclinic({1}, 0).point;
  for (int l = 1; l <= 3; ++l) {
    const auto e = exterior_power(g, l);
    EXPECT_EQ(e.dim(), static_cast<int>(binomial(3, l)));
    for (const auto& pt : {x, z})
      EXPECT_LT(oracle::rel_error(e.evaluate(pt, 0.4), oracle::compound(g.evaluate(pt, 0.4), l)), 1e-13);
  }
}

TEST(Lincocycle, Adjoint) {
  const SkewProduct dyn(perturbed_w1());
  Matrix h(2, 2);
  h << 2.0, Complex(1, -1), Complex(1, 1), 3.0;
  const FiberedPoint p{BiSequence::lazy_random(9, {0.5, 0.5}), 0.2};
  EXPECT_LT((adjoint_cocycle(CocycleGenerator::constant(h), dyn).evaluate(p) - h).norm(), 1e-15);
  Rng rng(3);
  const Matrix a = random_gaussian(2, 2, rng);
  EXPECT_LT((adjoint_cocycle(CocycleGenerator::constant(a), dyn).evaluate(p) - a.adjoint()).norm(), 1e-15);

  const auto g = bump_with_sin();
  const auto adj = adjoint_cocycle(g, dyn);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const FiberedPoint q{BiSequence::exact({0}, {1}, {0}, static_cast<std::int64_t>(s % 3)), 0.1 * static_cast<double>(s)};
    EXPECT_LT((adj.evaluate(q) - g.evaluate(dyn.step_back(q)).adjoint()).norm(), 1e-14);
  }
  // A_*^n over the inverse dynamics is (A^{-n})^H composed along the forward orbit
  const FiberedPoint q{BiSequence::lazy_random(12, {0.5, 0.5}), 0.6};
  const Matrix lhs = iterate_matrix(adj, dyn.inverse(), q, 4);
  const Matrix rhs = iterate_matrix(g, dyn, dyn.iterate(q, -4), 4).adjoint();
  EXPECT_LT(oracle::rel_error(lhs, rhs), 1e-12);
}

TEST(Lincocycle, HolderEstimates) {
  const MeasureSpec spec = fixtures::fair_coin();
  const Matrix a = fixtures::diag({3.0, 0.5});
  EXPECT_DOUBLE_EQ(holder_norm_estimate(CocycleGenerator::constant(a), spec, 50, 1), 3.0);

  const auto z = make_homoclinic({1}, 0);
  BumpSpec tiny{a, 1e-12 * fixtures::diag({1.0, 1.0}), Matrix(), z.point, 0.9, 1.0};
  EXPECT_NEAR(holder_norm_estimate(CocycleGenerator::bump_perturbed(tiny), spec, 200, 1), 3.0, 1e-9);

  const auto g = bump_with_sin();
  double prev = 0.0;
  for (int n : {16, 32, 64, 128, 256}) {
    const double est = holder_norm_estimate(g, spec, n, 5);
    EXPECT_GE(est, prev);
    prev = est;
  }
}

TEST(Lincocycle, TableDriven) {
  TableSpec t;
  t.dim = 2;
  t.alphabet_size = 2;
  t.window = 0;
  t.grid = 2;
  t.values = {fixtures::diag({1.0, 2.0}), fixtures::diag({2.0, 1.0}), fixtures::diag({3.0, 1.0}),
              fixtures::diag({1.0, 3.0})};
  const auto g = CocycleGenerator::table_driven(t);
  const auto x0 = BiSequence::constant(0), x1 = BiSequence::constant(1);
  // values at the left edge of each cell
  EXPECT_LT((g.evaluate(x0, 0.0) - t.values[0]).norm(), 1e-14);
  EXPECT_LT((g.evaluate(x0, 0.5) - t.values[1]).norm(), 1e-14);
  EXPECT_LT((g.evaluate(x1, 0.5) - t.values[3]).norm(), 1e-14);
  // smooth and periodic in t
  EXPECT_LT((g.evaluate(x0, 0.999999) - t.values[0]).norm(), 1e-9);

  t.values[2] = fixtures::diag({1.0, 1e-14});
  EXPECT_COCYCLE_ERROR(CocycleGenerator::table_driven(t).evaluate(x1, 0.0), ErrorKind::SingularValue);
}

TEST(Lincocycle, FiberBunchingExamples) {
  const MeasureSpec spec = fixtures::fair_coin();
  const SkewProduct dyn(fixtures::golden_rotation());
  Rng rng(6);
  const auto unitary = check_fiber_bunching(CocycleGenerator::constant(random_unitary(3, rng)), dyn, spec, 30, 3, 1);
  EXPECT_TRUE(unitary.pass);
  EXPECT_NEAR(unitary.slope, std::log(0.5), 1e-10);

  const auto bad = check_fiber_bunching(CocycleGenerator::diagonal_constant({2.0, 0.5}), dyn, spec, 30, 3, 1, 1.0);
  EXPECT_FALSE(bad.pass);
  for (int n = 1; n <= 30; ++n)
    EXPECT_NEAR(bad.log_curve[static_cast<std::size_t>(n - 1)], n * std::log(2.0), 1e-10);

  const auto good = check_fiber_bunching(CocycleGenerator::diagonal_constant({1.2, 1 / 1.2}), dyn, spec, 30, 3, 1, 1.0);
  EXPECT_TRUE(good.pass);
  EXPECT_NEAR(good.slope, std::log(1.44 / 2.0), 1e-10);
}

TEST(Lincocycle, SampledPointsAreReproducible) {
  const MeasureSpec spec = fixtures::fair_coin();
  const auto a = sample_fibered(spec, 5), b = sample_fibered(spec, 5);
  EXPECT_EQ(a.t, b.t);
  EXPECT_TRUE(a.base.agrees_on(b.base, -500, 500));
}

TEST(Lincocycle, BumpDifferenceKeepsPrecisionForNearbyPoints) {
  const auto ex = fixtures::theorem_c_d3();
  // x and y inside the ball, differing only at coordinate -60
  const auto x = BiSequence::splice(BiSequence::splice(ex.z.point, BiSequence::constant(1), -60), ex.z.point, -59);
  const auto& y = ex.z.point;
  ASSERT_EQ(x[-60], 1);
  ASSERT_TRUE(x.agrees_on(y, -59, 200));
  ASSERT_TRUE(x.agrees_on(y, -200, -61));
  ASSERT_GT(bump_weight(x, ex.z.point, 0.3, 1.0), 0.0);
  const Matrix want = -std::ldexp(1.0, -60) / 0.3 * fixtures::diag({1.4, 1.1, 0.8}) * fixtures::theorem_c_r3();
  EXPECT_LT(oracle::strict_rel_error(ex.gen.difference(x, 0.2, y, 0.2), want), 1e-14);
  const auto g2 = exterior_power(ex.gen, 2);
  const Matrix want2 = compound_difference(ex.gen.evaluate(y, 0.2), want, 2);
  EXPECT_LT(oracle::strict_rel_error(g2.difference(x, 0.2, y, 0.2), want2), 1e-14);
  // the naive subtraction loses every digit here
  EXPECT_GT(oracle::strict_rel_error(ex.gen.evaluate(x, 0.2) - ex.gen.evaluate(y, 0.2), want), 1e-3);
  // away from each other the plain subtraction is returned
  const auto far = BiSequence::lazy_random(3, {0.5, 0.5});
  EXPECT_LT((ex.gen.difference(x, 0.1, far, 0.7) - (ex.gen.evaluate(x, 0.1) - ex.gen.evaluate(far, 0.7))).norm(), 1e-14);
}
