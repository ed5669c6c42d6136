#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cocycle/spectrum.hpp"
#include "cocycle/ustates.hpp"
#include "support.hpp"

using namespace cocycle;

namespace {

double mean_distance_to(const AtomicGrassMeasure& m, const Subspace& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) acc += m.weights()[i] * grass_distance(m.atoms()[i], s);
  return acc;
}

Subspace line(std::initializer_list<Complex> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const auto& c : v) x(i++) = c;
  return Subspace::span_of(x);
}

}  // namespace

TEST(Ustates, MeasureValidation) {
  const auto e1 = Subspace::coordinate(3, {0});
  const auto e12 = Subspace::coordinate(3, {0, 1});
  EXPECT_COCYCLE_ERROR(AtomicGrassMeasure({e1, e1}, {0.5, 0.6}), ErrorKind::PreconditionViolation);
  EXPECT_COCYCLE_ERROR(AtomicGrassMeasure({e1, e1}, {1.0, 0.0}), ErrorKind::PreconditionViolation);
  EXPECT_COCYCLE_ERROR(AtomicGrassMeasure({e1, e12}, {0.5, 0.5}), ErrorKind::RankMismatch);
  const auto m = AtomicGrassMeasure::random(4, 2, 10, 3);
  EXPECT_EQ(m.size(), 10u);
  EXPECT_EQ(m.rank(), 2);
  EXPECT_NEAR(m.total_mass(), 1.0, 1e-12);
}

TEST(Ustates, PushforwardExamples) {
  const auto m = AtomicGrassMeasure::random(3, 1, 20, 1);
  const auto same = pushforward(m, identity(3));
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_LT(grass_distance(same.atoms()[i], m.atoms()[i]), 1e-14);

  Matrix swap = Matrix::Zero(2, 2);
  swap(0, 1) = 1.0;
  swap(1, 0) = 1.0;
  const auto moved = pushforward(AtomicGrassMeasure::uniform({Subspace::coordinate(2, {1})}), swap);
  EXPECT_LT(grass_distance(moved.atoms()[0], Subspace::coordinate(2, {0})), 1e-15);

  const auto lines = AtomicGrassMeasure::random(3, 1, 50, 2);
  const auto e1 = Subspace::coordinate(3, {0});
  const auto pushed = pushforward(lines, fixtures::diag({100.0, 1.0, 1.0}));
  EXPECT_LT(mean_distance_to(pushed, e1), mean_distance_to(lines, e1));

  EXPECT_COCYCLE_ERROR(pushforward(lines, fixtures::diag({1.0, 1.0, 0.0})), ErrorKind::SingularValue);
}

TEST(UstatesProperty, PushforwardPreservesMassAndCount) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = AtomicGrassMeasure::random(4, 1 + trial % 3, 7, static_cast<std::uint64_t>(trial));
    const auto out = pushforward(m, random_gaussian(4, 4, rng));
    EXPECT_EQ(out.size(), m.size());
    EXPECT_EQ(out.weights(), m.weights());
    EXPECT_EQ(out.rank(), m.rank());
  }
}

TEST(Ustates, IdentityCocycleKeepsDiameter) {
  const SkewProduct dyn(fixtures::golden_rotation());
  const auto m0 = AtomicGrassMeasure::random(3, 1, 10, 5);
  const FiberedPoint x{BiSequence::lazy_random(1, {0.5, 0.5}), 0.2};
  const auto steps = backward_pushforward_experiment(CocycleGenerator::constant(identity(3)), dyn, x, m0, {0, 10, 100});
  for (const auto& s : steps) EXPECT_NEAR(s.diameter, m0.diameter(), 1e-12);
}

TEST(Ustates, DiagonalContraction) {
  const SkewProduct dyn(fixtures::golden_rotation());
  const FiberedPoint x{BiSequence::lazy_random(2, {0.5, 0.5}), 0.4};
  const auto g = CocycleGenerator::diagonal_constant({4.0, 2.0, 1.0});
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto m0 = AtomicGrassMeasure::random(3, 1, 30, 10 + seed);
    // power-method oracle: a line v goes to diag(4^n, 2^n, 1) v, whose angle
    // to e1 has tangent at most 2^-n times the initial one
    double tan0 = 0.0;
    for (const auto& a : m0.atoms()) {
      const Vector v = a.frame().col(0);
      tan0 = std::max(tan0, v.tail(2).norm() / std::abs(v(0)));
    }
    std::vector<std::int64_t> ns;
    for (std::int64_t n = 0; n <= 40; ++n) ns.push_back(n);
    const auto steps = backward_pushforward_experiment(g, dyn, x, m0, ns);
    double prev = HUGE_VAL;
    for (const auto& s : steps) {
      EXPECT_LE(s.diameter, 2.0 * std::atan(tan0 * std::ldexp(1.0, -static_cast<int>(s.n))) + 1e-12) << s.n;
      // The angle metric is not contracted pair by pair while atoms are still
      // far from e1; once the support is within 1/4 rad of e1 it is.
      if (prev < 0.5) {
        EXPECT_LE(s.diameter, prev + 1e-9) << s.n;
      }
      prev = s.diameter;
    }
    EXPECT_LT(prev, 1e-9);
  }
}

TEST(Ustates, BumpExampleMeasuresConvergeToTheSection) {
  const auto ex = fixtures::theorem_c_d3();
  const SkewProduct dyn(fixtures::golden_rotation());
  const FiberedPoint x = sample_fibered(fixtures::fair_coin(), 77);
  const Subspace xi = section_xi(ex.gen, dyn, x, 1, 200);
  std::vector<Subspace> limits;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto steps = backward_pushforward_experiment(ex.gen, dyn, x, AtomicGrassMeasure::random(3, 1, 50, 40 + seed), {100, 500});
    EXPECT_LT(steps.back().diameter, 1e-6);
    limits.push_back(steps.back().measure.atoms()[0]);
    EXPECT_LT(grass_distance(limits.back(), xi), 1e-5);
  }
  EXPECT_LT(grass_distance(limits[0], limits[1]), 1e-5);
  EXPECT_LT(grass_distance(limits[0], limits[2]), 1e-5);
}

TEST(Ustates, SectionXiExamples) {
  const SkewProduct dyn(fixtures::golden_rotation());
  const FiberedPoint x{BiSequence::lazy_random(3, {0.5, 0.5}), 0.1};
  const auto xi = section_xi(CocycleGenerator::diagonal_constant({4.0, 2.0, 1.0}), dyn, x, 2, 60);
  EXPECT_LT(grass_distance(xi, Subspace::coordinate(3, {0, 1})), 1e-12);

  Rng rng(6);
  const Matrix s = random_gaussian(3, 3, rng);
  const Matrix a = s * fixtures::diag({3.0, 1.5, 0.5}) * s.inverse();
  for (int l = 1; l <= 2; ++l) {
    const auto got = section_xi(CocycleGenerator::constant(a), dyn, x, l, 100);
    EXPECT_LT(grass_distance(got, Subspace(s.leftCols(l))), 1e-6) << l;
  }
  EXPECT_COCYCLE_ERROR(section_xi(CocycleGenerator::constant(identity(3)), dyn, x, 1, 50),
                       ErrorKind::InsufficientEccentricity);
}

TEST(UstatesProperty, SectionIsInvariant) {
  const auto ex = fixtures::theorem_c_d3();
  const SkewProduct dyn(fixtures::golden_rotation());
  const double tol = 1e-6;
  for (std::uint64_t i = 0; i < 5; ++i) {
    const FiberedPoint x = sample_fibered(fixtures::fair_coin(), 300 + i);
    const FiberedPoint prev = dyn.step_back(x);
    for (int l = 1; l <= 2; ++l) {
      const Subspace pushed = section_xi(ex.gen, dyn, prev, l, 200, tol).image(ex.gen.evaluate(prev));
      EXPECT_LT(grass_distance(pushed, section_xi(ex.gen, dyn, x, l, 200, tol)), 10 * tol);
    }
  }
}

TEST(Ustates, ComplementarySectionOfDiagonal) {
  const SkewProduct dyn(fixtures::golden_rotation());
  const FiberedPoint x{BiSequence::lazy_random(4, {0.5, 0.5}), 0.3};
  const auto c = complementary_section(CocycleGenerator::diagonal_constant({3.0, 2.0, 0.5}), dyn, x, 1, 80);
  EXPECT_LT(grass_distance(c.xi, Subspace::coordinate(3, {0})), 1e-12);
  EXPECT_LT(grass_distance(c.xi_star, Subspace::coordinate(3, {0})), 1e-12);
  EXPECT_LT(grass_distance(c.eta, Subspace::coordinate(3, {1, 2})), 1e-12);
  EXPECT_NEAR(c.min_angle, std::numbers::pi / 2, 1e-12);
}

TEST(Ustates, ComplementarySectionOfNonNormalMatrix) {
  Matrix a(2, 2);
  a << 2.0, 1.0, 0.0, 0.5;
  const SkewProduct dyn(fixtures::golden_rotation());
  const FiberedPoint x{BiSequence::lazy_random(5, {0.5, 0.5}), 0.6};
  const auto c = complementary_section(CocycleGenerator::constant(a), dyn, x, 1, 80);
  // eigen-oracle: xi is the eigenline of 2, eta the eigenline of 1/2
  Eigen::ComplexEigenSolver<Matrix> es(a);
  const Eigen::Index fast = std::abs(es.eigenvalues()(0)) > std::abs(es.eigenvalues()(1)) ? 0 : 1;
  const Subspace fast_line = Subspace::span_of(es.eigenvectors().col(fast));
  const Subspace slow_line = Subspace::span_of(es.eigenvectors().col(1 - fast));
  EXPECT_LT(grass_distance(c.xi, fast_line), 1e-10);
  EXPECT_LT(grass_distance(c.eta, slow_line), 1e-10);
  EXPECT_NEAR(c.min_angle, grass_distance(fast_line, slow_line), 1e-10);
  EXPECT_NEAR(c.min_angle, std::acos(2.0 / std::sqrt(13.0)), 1e-10);

  EXPECT_COCYCLE_ERROR(complementary_section(CocycleGenerator::constant(identity(2)), dyn, x, 1, 20),
                       ErrorKind::InsufficientEccentricity);
}

TEST(Ustates, HyperplaneMassExamples) {
  const auto v = Subspace::coordinate(3, {1, 2});
  EXPECT_DOUBLE_EQ(hyperplane_mass(AtomicGrassMeasure::uniform({Subspace::coordinate(3, {0})}), v), 0.0);
  EXPECT_DOUBLE_EQ(hyperplane_mass(AtomicGrassMeasure::uniform({Subspace::coordinate(3, {1})}), v), 1.0);
  const AtomicGrassMeasure mixed({Subspace::coordinate(3, {0}), Subspace::coordinate(3, {2}), line({1.0, 1.0, 0.0})},
                                 {0.25, 0.5, 0.25});
  EXPECT_DOUBLE_EQ(hyperplane_mass(mixed, v), 0.5);
  EXPECT_COCYCLE_ERROR(hyperplane_mass(mixed, Subspace::coordinate(3, {1})), ErrorKind::RankMismatch);
}

TEST(Ustates, LimitMeasureAvoidsRandomHyperplanes) {
  const auto ex = fixtures::theorem_c_d3();
  const SkewProduct dyn(fixtures::golden_rotation());
  const FiberedPoint x = sample_fibered(fixtures::fair_coin(), 88);
  const auto steps = backward_pushforward_experiment(ex.gen, dyn, x, AtomicGrassMeasure::random(3, 1, 50, 9), {300});
  Rng rng(10);
  for (int i = 0; i < 100; ++i)
    EXPECT_LT(hyperplane_mass(steps.back().measure, Subspace(random_gaussian(3, 2, rng))), 0.01);
}

TEST(Ustates, QuasiProjective) {
  Rng rng(11);
  const auto q = QuasiProjective::normalize(random_gaussian(3, 3, rng));
  EXPECT_EQ(q.kernel_dim(), 0);
  EXPECT_NEAR(op_norm(q.matrix()), 1.0, 1e-12);

  const auto k = QuasiProjective::normalize(fixtures::diag({1.0, 1e-16}), 1e-12);
  EXPECT_EQ(k.kernel_dim(), 1);
  EXPECT_LT(grass_distance(Subspace(k.kernel_frame()), Subspace::coordinate(2, {1})), 1e-14);
  EXPECT_COCYCLE_ERROR(k.apply(Subspace::coordinate(2, {1})), ErrorKind::KernelHit);
  EXPECT_LT(grass_distance(k.apply(line({1.0, 1.0})), Subspace::coordinate(2, {0})), 1e-12);
  EXPECT_COCYCLE_ERROR(QuasiProjective::normalize(Matrix::Zero(2, 2)), ErrorKind::ZeroMatrix);
}

TEST(Ustates, OneSidedReductionHasTrivialStableHolonomy) {
  const auto ex = fixtures::theorem_c_d2();
  const SkewProduct dyn(fixtures::golden_rotation());
  const auto reduced = reduce_one_sided(ex.gen, dyn);
  for (std::uint64_t s = 0; s < 4; ++s) {
    const FiberedPoint p{BiSequence::splice(ex.z.point, BiSequence::lazy_random(500 + s, {0.5, 0.5}), 3), 0.2};
    const auto y = BiSequence::splice(BiSequence::lazy_random(600 + s, {0.5, 0.5}), p.base, -1);
    const auto q = strong_partner(dyn.family(), p, y, Leaf::Stable);
    const Matrix h = strong_holonomy(reduced, dyn, p, q, Leaf::Stable).matrix;
    EXPECT_LT(op_norm(h - identity(2)), 1e-8);
  }
}

TEST(UstatesProperty, EtaIsConstantOnLocalStableSets) {
  const auto ex = fixtures::theorem_c_d3();
  const SkewProduct dyn(fixtures::golden_rotation());
  const auto reduced = reduce_one_sided(ex.gen, dyn);
  for (std::uint64_t s = 0; s < 3; ++s) {
    const FiberedPoint p = sample_fibered(fixtures::fair_coin(), 900 + s);
    const auto y = BiSequence::splice(BiSequence::lazy_random(950 + s, {0.5, 0.5}), p.base, 0);
    const auto q = strong_partner(dyn.family(), p, y, Leaf::Stable);
    const auto cp = complementary_section(reduced, dyn, p, 1, 150);
    const auto cq = complementary_section(reduced, dyn, q, 1, 150);
    EXPECT_LT(grass_distance(cp.eta, cq.eta), 1e-6);
  }
}
