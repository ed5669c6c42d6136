#include "cocycle/skewprod.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cocycle/error.hpp"
#include "cocycle/random.hpp"

namespace cocycle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t word_count(int alphabet_size, int window) {
  std::size_t n = 1;
  for (int i = 0; i < 2 * window + 1; ++i) n *= static_cast<std::size_t>(alphabet_size);
  return n;
}

}  // namespace

double wrap_circle(double t) {
  double r = t - std::floor(t);
  if (r >= 1.0) r = 0.0;
  return r;
}

double dist_circle(double t, double s) {
  const double d = std::abs(wrap_circle(t) - wrap_circle(s));
  return std::min(d, 1.0 - d);
}

double dist_fibered(const FiberedPoint& p, const FiberedPoint& q) {
  return dist_sigma(p.base, q.base) + dist_circle(p.t, q.t);
}

FiberMapFamily::FiberMapFamily(Kind kind, int alphabet_size, int window, std::vector<double> angles,
                               double amplitude)
    : kind_(kind),
      alphabet_size_(alphabet_size),
      window_(window),
      angles_(std::move(angles)),
      amplitude_(amplitude) {
  require(alphabet_size >= 2, ErrorKind::InvalidConfig, "alphabet needs at least two symbols");
  require(window >= 0 && window <= 6, ErrorKind::InvalidConfig, "fiber window must lie in [0, 6]");
  require(angles_.size() == word_count(alphabet_size, window), ErrorKind::InvalidConfig,
          "fiber family needs one angle per window word (" +
              std::to_string(word_count(alphabet_size, window)) + ")");
  require(std::abs(kTwoPi * amplitude_) < 1.0, ErrorKind::InvalidConfig,
          "perturbation amplitude must satisfy |2 pi a| < 1");
}

FiberMapFamily FiberMapFamily::rotation(int alphabet_size, int window, std::vector<double> angles) {
  return FiberMapFamily(Kind::Rotation, alphabet_size, window, std::move(angles), 0.0);
}

FiberMapFamily FiberMapFamily::perturbed_rotation(int alphabet_size, int window,
                                                  std::vector<double> angles, double amplitude) {
  return FiberMapFamily(Kind::PerturbedRotation, alphabet_size, window, std::move(angles),
                        amplitude);
}

double FiberMapFamily::angle(const BiSequence& x) const {
  std::size_t idx = 0;
  for (int k = -window_; k <= window_; ++k)
    idx = idx * static_cast<std::size_t>(alphabet_size_) + static_cast<std::size_t>(x.coordinate(k));
  return angles_[idx];
}

double FiberMapFamily::apply(const BiSequence& x, double t) const {
  double u = t + angle(x);
  if (kind_ == Kind::PerturbedRotation) u += amplitude_ * std::sin(kTwoPi * t) / kTwoPi;
  return wrap_circle(u);
}

double FiberMapFamily::apply_inverse(const BiSequence& x, double t) const {
  const double target = t - angle(x);
  if (kind_ == Kind::Rotation) return wrap_circle(target);
  double u = target;
  for (int it = 0; it < 60; ++it) {
    const double g = u + amplitude_ * std::sin(kTwoPi * u) / kTwoPi - target;
    const double step = g / (1.0 + amplitude_ * std::cos(kTwoPi * u));
    u -= step;
    if (std::abs(step) < 1e-17) break;
  }
  return wrap_circle(u);
}

double FiberMapFamily::derivative(const BiSequence& /*x*/, double t) const {
  if (kind_ == Kind::Rotation) return 1.0;
  return 1.0 + amplitude_ * std::cos(kTwoPi * t);
}

double fiber_iterate(const FiberMapFamily& family, const BiSequence& x, std::int64_t n, double t) {
  double u = wrap_circle(t);
  if (n > 0) {
    for (std::int64_t j = 0; j < n; ++j) u = family.apply(x.shifted(j), u);
  } else {
    for (std::int64_t j = -1; j >= n; --j) u = family.apply_inverse(x.shifted(j), u);
  }
  return u;
}

FiberedPoint SkewProduct::forward_map(const FiberMapFamily& f, const FiberedPoint& p) {
  return {p.base.shifted(1), f.apply(p.base, p.t)};
}

FiberedPoint SkewProduct::inverse_map(const FiberMapFamily& f, const FiberedPoint& p) {
  BiSequence prev = p.base.shifted(-1);
  const double t = f.apply_inverse(prev, p.t);
  return {std::move(prev), t};
}

FiberedPoint SkewProduct::step(const FiberedPoint& p) const {
  return reversed_ ? inverse_map(family_, p) : forward_map(family_, p);
}

FiberedPoint SkewProduct::step_back(const FiberedPoint& p) const {
  return reversed_ ? forward_map(family_, p) : inverse_map(family_, p);
}

FiberedPoint SkewProduct::iterate(const FiberedPoint& p, std::int64_t n) const {
  FiberedPoint q = p;
  for (std::int64_t j = 0; j < n; ++j) q = step(q);
  for (std::int64_t j = 0; j < -n; ++j) q = step_back(q);
  return q;
}

MostlyNeutralReport check_mostly_neutral(const FiberMapFamily& family, const MeasureSpec& spec,
                                         int n_max, int samples, double declared_bound,
                                         std::uint64_t seed, int grid) {
  require(n_max >= 1, ErrorKind::PreconditionViolation, "n_max must be >= 1");
  MostlyNeutralReport report;
  report.declared_bound = declared_bound;
  if (family.kind() == FiberMapFamily::Kind::Rotation) {
    report.bound_estimate = 1.0;
    report.pass = 1.0 <= declared_bound;
    return report;
  }
  double bound = 1.0;
  for (int s = 0; s < samples; ++s) {
    const BiSequence x = sample_point(spec, hash_pair(seed, static_cast<std::uint64_t>(s)));
    for (int g = 0; g < grid; ++g) {
      const double t0 = (static_cast<double>(g) + 0.5) / static_cast<double>(grid);
      double t = t0;
      double deriv = 1.0;
      for (int n = 0; n < n_max; ++n) {
        const BiSequence xn = x.shifted(n);
        deriv *= family.derivative(xn, t);
        t = family.apply(xn, t);
        bound = std::max(bound, std::abs(deriv));
      }
      t = t0;
      deriv = 1.0;
      for (int n = 1; n <= n_max; ++n) {
        const BiSequence xn = x.shifted(-n);
        const double prev = family.apply_inverse(xn, t);
        deriv /= family.derivative(xn, prev);
        t = prev;
        bound = std::max(bound, std::abs(deriv));
      }
    }
  }
  report.bound_estimate = bound;
  report.pass = bound <= declared_bound;
  return report;
}

namespace {

// (f^n_y)^{-1} f^n_x (t) for n >= 0.
double stable_approximant(const FiberMapFamily& f, const BiSequence& x, const BiSequence& y,
                          int n, double t) {
  double u = t;
  for (int j = 0; j < n; ++j) u = f.apply(x.shifted(j), u);
  for (int j = n - 1; j >= 0; --j) u = f.apply_inverse(y.shifted(j), u);
  return u;
}

// (f^{-m}_y)^{-1} f^{-m}_x (t) for m >= 0.
double unstable_approximant(const FiberMapFamily& f, const BiSequence& x, const BiSequence& y,
                            int m, double t) {
  double u = t;
  for (int j = 1; j <= m; ++j) u = f.apply_inverse(x.shifted(-j), u);
  for (int j = m; j >= 1; --j) u = f.apply(y.shifted(-j), u);
  return u;
}

}  // namespace

double base_holonomy(const FiberMapFamily& family, const BiSequence& x, const BiSequence& y,
                     double t, Leaf which, double tol, int n_max) {
  require(tol > 0.0, ErrorKind::PreconditionViolation, "holonomy tolerance must be positive");
  if (which == Leaf::Stable)
    require(in_local_stable(x, y), ErrorKind::PreconditionViolation,
            "base holonomy h^s needs y in W^s_loc(x)");
  else
    require(in_local_unstable(x, y), ErrorKind::PreconditionViolation,
            "base holonomy h^u needs y in W^u_loc(x)");
  const auto approx = [&](int n) {
    return which == Leaf::Stable ? stable_approximant(family, x, y, n, t)
                                 : unstable_approximant(family, x, y, n, t);
  };
  // Windows of sigma^n x and sigma^n y coincide from n = w on; one more
  // step confirms stationarity.
  const int n_min = family.window() + 1;
  double prev = approx(n_min - 1);
  for (int n = n_min; n <= n_max; ++n) {
    const double cur = approx(n);
    if (dist_circle(cur, prev) < tol) return wrap_circle(cur);
    prev = cur;
  }
  fail(ErrorKind::NoConvergence, "base holonomy approximants did not settle");
}

bool strong_sets_member(const FiberMapFamily& family, const FiberedPoint& p, const FiberedPoint& q,
                        Leaf which, double tol) {
  const bool base_ok = which == Leaf::Stable ? in_local_stable(p.base, q.base)
                                             : in_local_unstable(p.base, q.base);
  if (!base_ok) return false;
  const double image = base_holonomy(family, p.base, q.base, p.t, which);
  return dist_circle(q.t, image) < tol;
}

FiberedPoint strong_partner(const FiberMapFamily& family, const FiberedPoint& p,
                            const BiSequence& y, Leaf which) {
  return {y, base_holonomy(family, p.base, y, p.t, which)};
}

CenterExponent center_exponent(const FiberMapFamily& family, const MeasureSpec& spec, int n_steps,
                               int n_orbits, std::uint64_t seed) {
  require(n_steps >= 1 && n_orbits >= 1, ErrorKind::PreconditionViolation,
          "center exponent needs n_steps, n_orbits >= 1");
  CenterExponent out;
  double sum = 0.0, sum_sq = 0.0, sum_back = 0.0;
  for (int o = 0; o < n_orbits; ++o) {
    const std::uint64_t s = hash_pair(seed, static_cast<std::uint64_t>(o));
    const BiSequence x = sample_point(spec, s);
    const double t0 = sample_fiber(spec, s, &x);
    double t = t0, log_d = 0.0;
    for (int n = 0; n < n_steps; ++n) {
      const BiSequence xn = x.shifted(n);
      log_d += std::log(std::abs(family.derivative(xn, t)));
      t = family.apply(xn, t);
    }
    const double fwd = log_d / n_steps;
    t = t0;
    log_d = 0.0;
    for (int n = 1; n <= n_steps; ++n) {
      const BiSequence xn = x.shifted(-n);
      const double prev = family.apply_inverse(xn, t);
      log_d -= std::log(std::abs(family.derivative(xn, prev)));
      t = prev;
    }
    sum += fwd;
    sum_sq += fwd * fwd;
    sum_back += log_d / n_steps;
  }
  out.forward = sum / n_orbits;
  out.backward = sum_back / n_orbits;
  if (n_orbits > 1) {
    const double var = std::max(0.0, (sum_sq - n_orbits * out.forward * out.forward) / (n_orbits - 1));
    out.stderr_forward = std::sqrt(var / n_orbits);
  }
  return out;
}

}  // namespace cocycle
