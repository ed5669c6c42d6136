#include <algorithm>
#include <cmath>

#include "cocycle/error.hpp"
#include "cocycle/lincocycle.hpp"
#include "cocycle/random.hpp"

namespace cocycle {

Leaf shift_leaf(const SkewProduct& dyn, Leaf which) {
  if (!dyn.reversed()) return which;
  return which == Leaf::Stable ? Leaf::Unstable : Leaf::Stable;
}

double fiber_holonomy(const SkewProduct& dyn, const BiSequence& x, const BiSequence& y, double t,
                      Leaf which) {
  return base_holonomy(dyn.family(), x, y, t, shift_leaf(dyn, which));
}

namespace {

constexpr int kQuietSteps = 8;
constexpr double kSnap = 1e-12;

void rescale(Matrix& m, double& log_scale) {
  const double s = m.cwiseAbs().maxCoeff();
  if (s > 1e64 || (s < 1e-64 && s > 0.0)) {
    m /= s;
    log_scale += std::log(s);
  }
}

}  // namespace

StrongHolonomy strong_holonomy(const CocycleGenerator& gen, const SkewProduct& dyn,
                               const FiberedPoint& p, const FiberedPoint& q, Leaf which,
                               double tol, int n_max) {
  require(tol > 0.0, ErrorKind::PreconditionViolation, "holonomy tolerance must be positive");
  const Leaf leaf = shift_leaf(dyn, which);
  require(strong_sets_member(dyn.family(), p, q, leaf), ErrorKind::PreconditionViolation,
          which == Leaf::Stable ? "q is not on the local strong-stable set of p"
                                : "q is not on the local strong-unstable set of p");

  const int d = gen.dim();
  StrongHolonomy out;
  out.matrix = Matrix::Identity(d, d);
  if (gen.constant_value()) return out;
  // Outer factors of the n-th approximant; the increment between successive
  // approximants is sandwiched between them.
  Matrix left = Matrix::Identity(d, d), right = Matrix::Identity(d, d);
  double log_left = 0.0, log_right = 0.0;
  FiberedPoint pp = p, qq = q;
  const int n_min = gen.window() + dyn.family().window() + 1;
  const double alpha = gen.holder_alpha();
  int quiet = 0;
  for (int n = 0; n < n_max; ++n) {
    if (which == Leaf::Unstable) {
      pp = dyn.step_back(pp);
      qq = dyn.step_back(qq);
    }
    if (dist_circle(pp.t, qq.t) < kSnap) qq.t = pp.t;
    const Matrix a = gen.evaluate(qq);
    const Matrix b = gen.evaluate(pp);
    Matrix inc;
    if (which == Leaf::Stable) {
      const Matrix a_inv = checked_inverse(a);
      inc = left * (a_inv * gen.difference(pp, qq)) * right;
      left = left * a_inv;
      right = b * right;
    } else {
      const Matrix b_inv = checked_inverse(b);
      inc = left * (gen.difference(qq, pp) * b_inv) * right;
      left = left * a;
      right = b_inv * right;
    }
    const double scale = std::exp(log_left + log_right);
    const double inc_norm = op_norm(inc) * scale;
    out.matrix += inc * scale;
    out.steps = n + 1;
    out.last_increment = inc_norm;
    rescale(left, log_left);
    rescale(right, log_right);
    if (!std::isfinite(inc_norm)) break;
    // Increments vanish exactly while both orbits sit where the generator is
    // locally constant, so quietness alone proves nothing. The envelope bounds
    // what a later visit to a non-constant region could still contribute.
    const double envelope = op_norm(left) * op_norm(right) * std::exp(log_left + log_right) *
                            std::pow(dist_fibered(pp, qq), alpha);
    if (!(envelope < 1.0 / tol)) break;
    quiet = inc_norm < tol && envelope < tol ? quiet + 1 : 0;
    if (out.steps >= n_min && quiet >= kQuietSteps) return out;
    if (which == Leaf::Stable) {
      pp = dyn.step(pp);
      qq = dyn.step(qq);
    }
  }
  fail(ErrorKind::NoConvergence,
       "strong holonomy approximants did not settle (fiber bunching violated?)");
}

double holonomy_constant(const CocycleGenerator& gen, const MeasureSpec& spec,
                         const BunchingReport& bunching, int samples, std::uint64_t seed) {
  if (!bunching.pass || bunching.theta >= 1.0) return HUGE_VAL;
  double sup_inv = 0.0;
  if (auto a = gen.constant_value()) {
    sup_inv = op_norm(checked_inverse(*a));
  } else {
    for (int i = 0; i < samples; ++i) {
      const FiberedPoint p = sample_fibered(spec, hash_pair(seed ^ 0x1a7e, static_cast<std::uint64_t>(i)));
      sup_inv = std::max(sup_inv, op_norm(checked_inverse(gen.evaluate(p))));
    }
  }
  const double c_hol = holder_constant_estimate(gen, spec, std::max(samples, 2), seed);
  return sup_inv * c_hol * bunching.constant / (1.0 - bunching.theta);
}

}  // namespace cocycle

namespace cocycle {

namespace {

double rel_error(const Matrix& a, const Matrix& b) {
  return op_norm(a - b) / std::max(1.0, op_norm(b));
}

FiberedPoint leaf_neighbour(const SkewProduct& dyn, const MeasureSpec& spec, const FiberedPoint& p,
                            Rng& rng) {
  const auto cut = static_cast<std::int64_t>(rng.below(12)) + 1;
  const BiSequence y = BiSequence::splice(sample_point(spec, rng.next()), p.base, -cut + 1);
  return strong_partner(dyn.family(), p, y, shift_leaf(dyn, Leaf::Stable));
}

}  // namespace

HolonomyAxiomReport check_holonomy_axioms(const CocycleGenerator& gen, const SkewProduct& dyn,
                                          const MeasureSpec& spec, int pairs, double constant_l,
                                          std::uint64_t seed, double tol) {
  require(pairs >= 1, ErrorKind::PreconditionViolation, "need at least one pair");
  HolonomyAxiomReport out;
  out.pairs = pairs;
  out.constant_l = constant_l;
  out.tol = tol;
  const double alpha = gen.holder_alpha();
  for (int i = 0; i < pairs; ++i) {
    Rng rng = Rng::stream(hash_pair(seed, 0xa810u), static_cast<std::uint64_t>(i));
    const FiberedPoint p = sample_fibered(spec, rng.next());
    const FiberedPoint q = leaf_neighbour(dyn, spec, p, rng);
    const FiberedPoint r = leaf_neighbour(dyn, spec, p, rng);

    const Matrix h_pq = strong_holonomy(gen, dyn, p, q, Leaf::Stable).matrix;
    const Matrix h_fpq = strong_holonomy(gen, dyn, dyn.step(p), dyn.step(q), Leaf::Stable).matrix;
    const Matrix pushed = gen.evaluate(q) * h_pq * checked_inverse(gen.evaluate(p));
    out.equivariance_error = std::max(out.equivariance_error, rel_error(h_fpq, pushed));

    const Matrix h_qr = strong_holonomy(gen, dyn, q, r, Leaf::Stable).matrix;
    const Matrix h_pr = strong_holonomy(gen, dyn, p, r, Leaf::Stable).matrix;
    out.composition_error = std::max(out.composition_error, rel_error(h_qr * h_pq, h_pr));

    const double d = dist_fibered(p, q);
    const int dim = gen.dim();
    const double dev = op_norm(h_pq - Matrix::Identity(dim, dim));
    if (d > 0.0) out.holder_ratio = std::max(out.holder_ratio, dev / std::pow(d, alpha));
  }
  out.equivariance = out.equivariance_error <= tol;
  out.composition = out.composition_error <= tol;
  out.holder = out.holder_ratio <= constant_l;
  return out;
}

}  // namespace cocycle
