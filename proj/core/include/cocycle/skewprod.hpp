#pragma once

#include <cstdint>
#include <vector>

#include "cocycle/symbolic.hpp"

namespace cocycle {

/// Reduce to the representative in [0, 1).
double wrap_circle(double t);

/// Distance on R/Z.
double dist_circle(double t, double s);

/// A point of M = Sigma x K with K = R/Z.
struct FiberedPoint {
  BiSequence base = BiSequence::constant(0);
  double t = 0.0;
};

/// dist_Sigma + dist_K.
double dist_fibered(const FiberedPoint& p, const FiberedPoint& q);

/// Window-local circle diffeomorphisms f_x depending on x_{-w..w}:
///   Rotation:           t -> t + alpha(x)
///   PerturbedRotation:  t -> t + alpha(x) + a sin(2 pi t) / (2 pi),  |2 pi a| < 1
/// Angles are indexed by the window word read as a base-N number, most
/// significant digit first (x_{-w} leads).
class FiberMapFamily {
 public:
  enum class Kind { Rotation, PerturbedRotation };

  static FiberMapFamily rotation(int alphabet_size, int window, std::vector<double> angles);
  static FiberMapFamily perturbed_rotation(int alphabet_size, int window,
                                           std::vector<double> angles, double amplitude);

  Kind kind() const { return kind_; }
  int window() const { return window_; }
  int alphabet_size() const { return alphabet_size_; }
  double amplitude() const { return amplitude_; }
  const std::vector<double>& angles() const { return angles_; }

  double angle(const BiSequence& x) const;

  double apply(const BiSequence& x, double t) const;
  double apply_inverse(const BiSequence& x, double t) const;
  /// d f_x / dt at t.
  double derivative(const BiSequence& x, double t) const;

 private:
  FiberMapFamily(Kind kind, int alphabet_size, int window, std::vector<double> angles,
                 double amplitude);

  Kind kind_;
  int alphabet_size_;
  int window_;
  std::vector<double> angles_;
  double amplitude_;
};

/// f^n_x(t): forward composition for n > 0, identity at 0, inverse
/// composition for n < 0.
double fiber_iterate(const FiberMapFamily& family, const BiSequence& x, std::int64_t n, double t);

/// The skew-product f(x, t) = (sigma x, f_x(t)), or its inverse when
/// `reversed` is set. Cocycles are iterated over a SkewProduct so that the
/// adjoint cocycle can live over f^{-1}.
class SkewProduct {
 public:
  explicit SkewProduct(FiberMapFamily family, bool reversed = false)
      : family_(std::move(family)), reversed_(reversed) {}

  const FiberMapFamily& family() const { return family_; }
  bool reversed() const { return reversed_; }
  SkewProduct inverse() const { return SkewProduct(family_, !reversed_); }

  FiberedPoint step(const FiberedPoint& p) const;
  FiberedPoint step_back(const FiberedPoint& p) const;
  FiberedPoint iterate(const FiberedPoint& p, std::int64_t n) const;

 private:
  static FiberedPoint forward_map(const FiberMapFamily& f, const FiberedPoint& p);
  static FiberedPoint inverse_map(const FiberMapFamily& f, const FiberedPoint& p);

  FiberMapFamily family_;
  bool reversed_;
};

struct MostlyNeutralReport {
  double bound_estimate = 1.0;  // max |D f^n_x(t)| over samples and |n| <= n_max
  double declared_bound = 0.0;
  bool pass = true;
};

/// Sampled bound on |D f^n_x| for |n| <= n_max. Rotation families return
/// exactly 1 without sampling.
MostlyNeutralReport check_mostly_neutral(const FiberMapFamily& family, const MeasureSpec& spec,
                                         int n_max, int samples, double declared_bound,
                                         std::uint64_t seed, int grid = 16);

enum class Leaf { Stable, Unstable };

inline constexpr double kDefaultHolonomyTol = 1e-12;

/// h^s_{x,y}(t) = lim (f^n_y)^{-1} f^n_x(t) (n -> +inf), resp. h^u with n -> -inf.
/// Throws PreconditionViolation if y is not on the local stable (unstable)
/// set of x, NoConvergence if the approximants fail to settle.
double base_holonomy(const FiberMapFamily& family, const BiSequence& x, const BiSequence& y,
                     double t, Leaf which, double tol = kDefaultHolonomyTol,
                     int n_max = 10000);

inline double base_holonomy_s(const FiberMapFamily& family, const BiSequence& x,
                              const BiSequence& y, double t, double tol = kDefaultHolonomyTol) {
  return base_holonomy(family, x, y, t, Leaf::Stable, tol);
}
inline double base_holonomy_u(const FiberMapFamily& family, const BiSequence& x,
                              const BiSequence& y, double t, double tol = kDefaultHolonomyTol) {
  return base_holonomy(family, x, y, t, Leaf::Unstable, tol);
}

/// q in W^{ss}_loc(p) (resp. W^{uu}_loc(p)).
bool strong_sets_member(const FiberMapFamily& family, const FiberedPoint& p, const FiberedPoint& q,
                        Leaf which, double tol = 1e-9);

/// Point of W^{ss}_loc(p) (resp. W^{uu}) over the base point y.
FiberedPoint strong_partner(const FiberMapFamily& family, const FiberedPoint& p,
                            const BiSequence& y, Leaf which);

struct CenterExponent {
  double forward = 0.0;   // mean (1/n) log |D f^n_x(t)|
  double backward = 0.0;  // mean (1/n) log |D f^{-n}_x(t)|
  double stderr_forward = 0.0;
};

/// Fiber (center) Lyapunov exponent along mu-typical orbits.
CenterExponent center_exponent(const FiberMapFamily& family, const MeasureSpec& spec, int n_steps,
                               int n_orbits, std::uint64_t seed);

}  // namespace cocycle
