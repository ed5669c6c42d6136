#pragma once

#include <cstdint>
#include <vector>

#include "cocycle/lincocycle.hpp"
#include "cocycle/subspace.hpp"

namespace cocycle {

/// Finitely supported probability measure on Grass(l, d).
class AtomicGrassMeasure {
 public:
  AtomicGrassMeasure(std::vector<Subspace> atoms, std::vector<double> weights);

  static AtomicGrassMeasure uniform(std::vector<Subspace> atoms);
  /// `count` atoms drawn from the unitarily invariant distribution.
  static AtomicGrassMeasure random(int d, int l, int count, std::uint64_t seed);

  int dim() const { return atoms_.front().dim(); }
  int rank() const { return atoms_.front().rank(); }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<Subspace>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  double total_mass() const;

  /// Largest grass_distance between two atoms.
  double diameter() const;

 private:
  std::vector<Subspace> atoms_;
  std::vector<double> weights_;
};

/// Push-forward by an invertible matrix; throws SingularValue.
AtomicGrassMeasure pushforward(const AtomicGrassMeasure& m, const Matrix& l_mat);

struct PushforwardStep {
  std::int64_t n = 0;
  AtomicGrassMeasure measure;
  double diameter = 0.0;
};

/// For each n: pushes m0 by A^n(f^{-n}(point)), frames renormalized every step.
std::vector<PushforwardStep> backward_pushforward_experiment(
    const CocycleGenerator& gen, const SkewProduct& dyn, const FiberedPoint& point,
    const AtomicGrassMeasure& m0, const std::vector<std::int64_t>& n_list, int threads = 0);

/// Image under A^n(f^{-n}(point)) of its most expanded l-subspace. Throws
/// InsufficientEccentricity when the eccentricity is <= 1/tol and
/// NoConvergence when the result moved by more than tol since n - 10.
Subspace section_xi(const CocycleGenerator& gen, const SkewProduct& dyn,
                    const FiberedPoint& point, int l, std::int64_t n, double tol = 1e-6);

struct ComplementarySection {
  Subspace xi;
  Subspace xi_star;  // section of the adjoint cocycle over the inverse dynamics
  Subspace eta;      // orthogonal complement of xi_star
  double min_angle = 0.0;
};

/// Throws NonTransverse when xi and eta are not transverse.
ComplementarySection complementary_section(const CocycleGenerator& gen, const SkewProduct& dyn,
                                           const FiberedPoint& point, int l, std::int64_t n,
                                           double tol = 1e-6);

/// Total weight of atoms meeting V nontrivially (up to tol_angle).
double hyperplane_mass(const AtomicGrassMeasure& m, const Subspace& v, double tol_angle = 1e-6);

/// The projective action of a possibly singular map, normalized to norm 1.
class QuasiProjective {
 public:
  static QuasiProjective normalize(const Matrix& l_mat, double threshold = 1e-10);

  const Matrix& matrix() const { return q_; }
  int kernel_dim() const { return kernel_dim_; }
  /// Numerical kernel (rank 0 frame when trivial).
  const Matrix& kernel_frame() const { return kernel_; }
  double threshold() const { return threshold_; }

  /// Image subspace; throws KernelHit when the subspace meets the kernel.
  Subspace apply(const Subspace& s) const;

 private:
  Matrix q_;
  Matrix kernel_;
  int kernel_dim_ = 0;
  double threshold_ = 1e-10;
};

/// Conjugates the cocycle by stable holonomies onto the one-sided points
/// (past replaced by `reference`): B(p) = H^s_{f(pi p), pi(f p)} A(pi p).
/// The result depends on the future coordinates and t only, so its stable
/// holonomies are trivial.
CocycleGenerator reduce_one_sided(const CocycleGenerator& gen, const SkewProduct& dyn,
                                  Symbol reference = 0);

/// pi(p): past replaced by the reference symbol, fiber moved by h^s.
FiberedPoint one_sided_projection(const SkewProduct& dyn, const FiberedPoint& p, Symbol reference);

}  // namespace cocycle
