#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cocycle/linalg.hpp"
#include "cocycle/skewprod.hpp"
#include "cocycle/symbolic.hpp"

namespace cocycle {

/// Backend of a cocycle generator. Implementations are immutable and may be
/// evaluated concurrently.
class GeneratorImpl {
 public:
  virtual ~GeneratorImpl() = default;

  virtual int dim() const = 0;
  /// Evaluation reads x_{-w..w} only (a bump reads the whole metric window).
  virtual int window() const = 0;
  virtual double holder_alpha() const { return 1.0; }
  virtual Matrix evaluate(const BiSequence& x, double t) const = 0;
  /// A(x, s) - A(y, t). Overridden where the plain subtraction cancels badly
  /// for nearby points.
  virtual Matrix difference(const BiSequence& x, double s, const BiSequence& y, double t) const {
    return evaluate(x, s) - evaluate(y, t);
  }
  virtual std::string kind_name() const = 0;

  /// Eigenvalues when the generator is a constant diagonal matrix. Enables
  /// the closed-form spectrum path.
  virtual std::optional<std::vector<Complex>> constant_diagonal() const { return std::nullopt; }
  /// The constant value when evaluation ignores (x, t).
  virtual std::optional<Matrix> constant_value() const { return std::nullopt; }
};

struct BumpSpec {
  Matrix base;
  Matrix r;
  Matrix r_sin;  // optional: R(t) = R + sin(2 pi t) R_sin; empty means zero
  BiSequence center = BiSequence::constant(0);
  double radius = 0.3;
  double exponent = 1.0;
};

/// Matrix-valued function of (window word, t) on a uniform t-grid with
/// periodic cosine-smoothstep interpolation between cells. An optional base
/// generator is added to the table value.
struct TableSpec;

/// A window-local Hölder map (x, t) -> GL(d, C). Value type; copies share
/// the immutable backend.
class CocycleGenerator {
 public:
  enum class Kind { Constant, DiagonalConstant, BumpPerturbed, TableDriven, ExteriorPower, Adjoint, Custom };

  explicit CocycleGenerator(std::shared_ptr<const GeneratorImpl> impl, Kind kind = Kind::Custom);

  static CocycleGenerator constant(const Matrix& a);
  static CocycleGenerator diagonal_constant(const std::vector<Complex>& tau);
  /// A (I + psi(x) R(t)) with psi(x) = max(0, 1 - dist(x, z) / r)^beta.
  static CocycleGenerator bump_perturbed(const BumpSpec& spec);
  static CocycleGenerator table_driven(const TableSpec& spec);

  int dim() const { return impl_->dim(); }
  int window() const { return impl_->window(); }
  double holder_alpha() const { return impl_->holder_alpha(); }
  Kind kind() const { return kind_; }
  std::string kind_name() const { return impl_->kind_name(); }

  Matrix evaluate(const BiSequence& x, double t) const { return impl_->evaluate(x, t); }
  Matrix evaluate(const FiberedPoint& p) const { return impl_->evaluate(p.base, p.t); }
  Matrix difference(const BiSequence& x, double s, const BiSequence& y, double t) const {
    return impl_->difference(x, s, y, t);
  }
  Matrix difference(const FiberedPoint& p, const FiberedPoint& q) const {
    return impl_->difference(p.base, p.t, q.base, q.t);
  }

  std::optional<std::vector<Complex>> constant_diagonal() const { return impl_->constant_diagonal(); }
  std::optional<Matrix> constant_value() const { return impl_->constant_value(); }

  const GeneratorImpl& impl() const { return *impl_; }
  template <class T>
  const T* as() const {
    return dynamic_cast<const T*>(impl_.get());
  }

 private:
  std::shared_ptr<const GeneratorImpl> impl_;
  Kind kind_;
};

struct TableSpec {
  int dim = 0;
  int alphabet_size = 2;
  int window = 0;
  int grid = 1;
  /// values[word * grid + cell], words read base-N with x_{-w} leading.
  std::vector<Matrix> values;
  std::optional<CocycleGenerator> base;
};

/// psi(x) for the bump; exact 0 outside the open ball B(z, r).
double bump_weight(const BiSequence& x, const BiSequence& center, double radius, double exponent);

/// Generator of the l-th compound matrices, dimension C(d, l).
CocycleGenerator exterior_power(const CocycleGenerator& gen, int l);

/// A_*(p) = A(f^{-1} p)^H, a cocycle over dyn.inverse().
CocycleGenerator adjoint_cocycle(const CocycleGenerator& gen, const SkewProduct& dyn);
inline CocycleGenerator adjoint_cocycle(const CocycleGenerator& gen, const FiberMapFamily& family) {
  return adjoint_cocycle(gen, SkewProduct(family));
}

/// Products longer than this are renormalized automatically.
inline constexpr std::int64_t kAutoRenormalize = 200;

/// A^n(p): forward product along the orbit for n > 0, identity for n = 0,
/// product of inverses along the backward orbit for n < 0.
ScaledMatrix iterate(const CocycleGenerator& gen, const SkewProduct& dyn, const FiberedPoint& p,
                     std::int64_t n, bool renormalize = false);

/// iterate() folded back into a plain matrix (may overflow for huge n).
Matrix iterate_matrix(const CocycleGenerator& gen, const SkewProduct& dyn, const FiberedPoint& p,
                      std::int64_t n);

/// A mu-distributed point of M.
FiberedPoint sample_fibered(const MeasureSpec& spec, std::uint64_t seed);

/// sup ||A|| plus the largest sampled Hölder quotient. Sample i depends only
/// on (seed, i), so the estimate is nondecreasing in `samples`.
double holder_norm_estimate(const CocycleGenerator& gen, const MeasureSpec& spec, int samples,
                            std::uint64_t seed);

/// Largest sampled quotient ||A(p) - A(q)|| / dist(p, q)^alpha.
double holder_constant_estimate(const CocycleGenerator& gen, const MeasureSpec& spec, int samples,
                                std::uint64_t seed);

struct BunchingReport {
  /// log of max over samples of ||A^n|| ||(A^n)^{-1}|| lambda^{n alpha}, n = 1..N.
  std::vector<double> log_curve;
  double slope = 0.0;      // regression slope on [N/2, N]
  double theta = 1.0;      // exp(slope)
  double constant = 1.0;   // smallest C with curve(n) <= C theta^n on 1..N
  bool pass = false;
};

BunchingReport check_fiber_bunching(const CocycleGenerator& gen, const SkewProduct& dyn,
                                    const MeasureSpec& spec, int n_max, int samples,
                                    std::uint64_t seed, double alpha = -1.0);

struct StrongHolonomy {
  Matrix matrix;
  int steps = 0;
  double last_increment = 0.0;
};

/// H^s_{p,q} = lim A^n(q)^{-1} A^n(p) (n -> +inf), resp. H^u with n -> -inf,
/// truncated once increments stay below tol. The leaf refers to `dyn`: over
/// reversed dynamics the stable leaf is the unstable leaf of the shift.
/// Throws PreconditionViolation when q is not on the strong leaf of p and
/// NoConvergence after n_max steps.
StrongHolonomy strong_holonomy(const CocycleGenerator& gen, const SkewProduct& dyn,
                               const FiberedPoint& p, const FiberedPoint& q, Leaf which,
                               double tol = kDefaultHolonomyTol, int n_max = 10000);

/// Shift-level leaf corresponding to `which` for the given dynamics.
Leaf shift_leaf(const SkewProduct& dyn, Leaf which);

/// Base (center) holonomy for the dynamics `dyn`.
double fiber_holonomy(const SkewProduct& dyn, const BiSequence& x, const BiSequence& y, double t,
                      Leaf which);

/// Constant L in ||H^s_{p,q} - id|| <= L dist(p, q)^alpha, from the bunching
/// fit: L = sup||A^{-1}|| C_hol C / (1 - theta).
double holonomy_constant(const CocycleGenerator& gen, const MeasureSpec& spec,
                         const BunchingReport& bunching, int samples, std::uint64_t seed);

struct HolonomyAxiomReport {
  int pairs = 0;
  double equivariance_error = 0.0;  // max relative error of H_{fp,fq} = A(q) H_{p,q} A(p)^{-1}
  double composition_error = 0.0;   // max relative error of H_{q,r} H_{p,q} = H_{p,r}
  double holder_ratio = 0.0;        // max ||H_{p,q} - id|| / dist(p, q)^alpha
  double constant_l = 0.0;
  double tol = 1e-8;
  bool equivariance = false;
  bool composition = false;
  bool holder = false;
};

/// Strong-stable holonomy axioms on random triples p, q, r of one local
/// strong-stable set (pasts replaced beyond random cuts).
HolonomyAxiomReport check_holonomy_axioms(const CocycleGenerator& gen, const SkewProduct& dyn,
                                          const MeasureSpec& spec, int pairs, double constant_l,
                                          std::uint64_t seed, double tol = 1e-8);

}  // namespace cocycle
