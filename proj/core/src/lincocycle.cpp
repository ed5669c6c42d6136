#include "cocycle/lincocycle.hpp"

#include <algorithm>
#include <cmath>

#include "cocycle/error.hpp"
#include "cocycle/random.hpp"
#include "cocycle/stats.hpp"

namespace cocycle {

ScaledMatrix iterate(const CocycleGenerator& gen, const SkewProduct& dyn, const FiberedPoint& p,
                     std::int64_t n, bool renormalize) {
  const int d = gen.dim();
  const bool scale = renormalize || n > kAutoRenormalize || n < -kAutoRenormalize;
  ScaledMatrix out{Matrix::Identity(d, d), 0.0};
  if (n > 0) {
    FiberedPoint q = p;
    for (std::int64_t j = 0; j < n; ++j) {
      out.m = gen.evaluate(q) * out.m;
      if (scale) out.renormalize();
      if (j + 1 < n) q = dyn.step(q);
    }
  } else if (n < 0) {
    FiberedPoint q = p;
    for (std::int64_t j = 0; j < -n; ++j) {
      q = dyn.step_back(q);
      out.m = checked_inverse(gen.evaluate(q)) * out.m;
      if (scale) out.renormalize();
    }
  }
  return out;
}

Matrix iterate_matrix(const CocycleGenerator& gen, const SkewProduct& dyn, const FiberedPoint& p,
                      std::int64_t n) {
  const ScaledMatrix s = iterate(gen, dyn, p, n);
  return s.log_scale == 0.0 ? s.m : Matrix(s.m * std::exp(s.log_scale));
}

FiberedPoint sample_fibered(const MeasureSpec& spec, std::uint64_t seed) {
  FiberedPoint p{sample_point(spec, seed), 0.0};
  p.t = sample_fiber(spec, seed, &p.base);
  return p;
}

namespace {

// A nearby point: either the past or the future of p is replaced beyond a
// random cut, and the fiber coordinate moves by a random dyadic amount.
FiberedPoint nearby(const MeasureSpec& spec, const FiberedPoint& p, Rng& rng) {
  const BiSequence other = sample_point(spec, rng.next());
  const auto cut = static_cast<std::int64_t>(rng.below(9)) + 1;
  FiberedPoint q = p;
  switch (rng.below(3)) {
    case 0: q.base = BiSequence::splice(other, p.base, -cut + 1); break;
    case 1: q.base = BiSequence::splice(p.base, other, cut); break;
    default: break;
  }
  const double dt = std::ldexp(rng.uniform(-1.0, 1.0), -static_cast<int>(rng.below(20)));
  q.t = wrap_circle(p.t + dt);
  return q;
}

}  // namespace

double holder_constant_estimate(const CocycleGenerator& gen, const MeasureSpec& spec, int samples,
                                std::uint64_t seed) {
  require(samples >= 2, ErrorKind::PreconditionViolation, "holder estimate needs samples >= 2");
  const double alpha = gen.holder_alpha();
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    const FiberedPoint p = sample_fibered(spec, rng.next());
    const FiberedPoint q = nearby(spec, p, rng);
    const double d = dist_fibered(p, q);
    if (d <= 0.0) continue;
    const double diff = op_norm(gen.evaluate(p) - gen.evaluate(q));
    best = std::max(best, diff / std::pow(d, alpha));
  }
  return best;
}

double holder_norm_estimate(const CocycleGenerator& gen, const MeasureSpec& spec, int samples,
                            std::uint64_t seed) {
  require(samples >= 2, ErrorKind::PreconditionViolation, "holder estimate needs samples >= 2");
  double sup = 0.0;
  if (auto a = gen.constant_value()) {
    sup = op_norm(*a);
  } else {
    for (int i = 0; i < samples; ++i) {
      Rng rng = Rng::stream(hash_pair(seed, 0x5u), static_cast<std::uint64_t>(i));
      sup = std::max(sup, op_norm(gen.evaluate(sample_fibered(spec, rng.next()))));
    }
  }
  return sup + holder_constant_estimate(gen, spec, samples, seed);
}

BunchingReport check_fiber_bunching(const CocycleGenerator& gen, const SkewProduct& dyn,
                                    const MeasureSpec& spec, int n_max, int samples,
                                    std::uint64_t seed, double alpha) {
  require(n_max >= 1 && samples >= 1, ErrorKind::PreconditionViolation,
          "fiber bunching check needs N >= 1 and samples >= 1");
  if (alpha <= 0.0) alpha = gen.holder_alpha();
  const double log_lambda = std::log(kLambda);
  BunchingReport report;
  report.log_curve.assign(static_cast<std::size_t>(n_max), -HUGE_VAL);
  for (int s = 0; s < samples; ++s) {
    FiberedPoint p = sample_fibered(spec, hash_pair(seed, static_cast<std::uint64_t>(s)));
    const int d = gen.dim();
    ScaledMatrix fwd{Matrix::Identity(d, d), 0.0};
    ScaledMatrix inv{Matrix::Identity(d, d), 0.0};
    for (int n = 1; n <= n_max; ++n) {
      const Matrix a = gen.evaluate(p);
      fwd.m = a * fwd.m;
      inv.m = inv.m * checked_inverse(a);
      fwd.renormalize();
      inv.renormalize();
      // ||A^n|| and ||(A^n)^{-1}|| from separate products: a single SVD
      // cannot resolve the smallest singular value of a long product.
      const double v = std::log(op_norm(fwd.m)) + fwd.log_scale + std::log(op_norm(inv.m)) +
                       inv.log_scale + n * alpha * log_lambda;
      auto& slot = report.log_curve[static_cast<std::size_t>(n - 1)];
      slot = std::max(slot, v);
      p = dyn.step(p);
    }
  }
  const int lo = std::max(1, n_max / 2);
  std::vector<double> xs, ys;
  for (int n = lo; n <= n_max; ++n) {
    xs.push_back(n);
    ys.push_back(report.log_curve[static_cast<std::size_t>(n - 1)]);
  }
  if (xs.size() >= 2) report.slope = linear_fit(xs, ys).slope;
  else report.slope = ys.front() / n_max;
  report.theta = std::exp(report.slope);
  double log_c = 0.0;
  for (int n = 1; n <= n_max; ++n)
    log_c = std::max(log_c, report.log_curve[static_cast<std::size_t>(n - 1)] - n * report.slope);
  report.constant = std::exp(log_c);
  report.pass = report.slope < 0.0;
  return report;
}

}  // namespace cocycle
