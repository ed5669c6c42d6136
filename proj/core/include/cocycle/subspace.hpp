#pragma once

#include <vector>

#include "cocycle/linalg.hpp"

namespace cocycle {

/// A point of Grass(l, d): an l-dimensional subspace of C^d stored as an
/// orthonormal d x l frame. The frame is canonical: two Subspace values that
/// span the same space carry the same frame up to rounding.
class Subspace {
 public:
  Subspace() = default;

  /// Span of the columns of `columns`, which must have full column rank.
  explicit Subspace(const Matrix& columns);

  static Subspace span_of(const Vector& v);
  static Subspace coordinate(int d, const std::vector<int>& axes);

  int dim() const { return static_cast<int>(frame_.rows()); }
  int rank() const { return static_cast<int>(frame_.cols()); }
  const Matrix& frame() const { return frame_; }

  /// Orthogonal projector onto the subspace.
  Matrix projector() const { return frame_ * frame_.adjoint(); }

  /// Plücker coordinates: the l x l minors of the frame, lexicographic rows.
  Vector plucker() const;

  Subspace orthogonal_complement() const;

  /// Image under an invertible linear map.
  Subspace image(const Matrix& map) const;

 private:
  Matrix frame_;
};

/// Principal angles (ascending) between two subspaces of equal dimension;
/// accurate for small angles.
RealVector principal_angles(const Subspace& a, const Subspace& b);

/// Euclidean norm of the principal-angle vector; throws RankMismatch.
double grass_distance(const Subspace& a, const Subspace& b);

/// Smallest principal angle between subspaces of arbitrary ranks. Zero iff
/// they intersect nontrivially.
double min_principal_angle(const Subspace& a, const Subspace& b);

/// Angle between two lines given by representatives.
double line_angle(const Vector& u, const Vector& v);

}  // namespace cocycle
