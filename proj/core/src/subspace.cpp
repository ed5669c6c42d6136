#include "cocycle/subspace.hpp"

#include <algorithm>
#include <cmath>

#include "cocycle/error.hpp"

namespace cocycle {

namespace {

constexpr double kRankTolerance = 1e-13;

// Gram-Schmidt over the columns of the projector, always taking the column
// with the largest residual (ties to the lowest index). The result depends on
// the projector only, so equal subspaces get equal frames.
Matrix canonical_frame(const Matrix& projector, int rank) {
  const int d = static_cast<int>(projector.rows());
  Matrix residual = projector;
  Matrix frame(d, rank);
  for (int k = 0; k < rank; ++k) {
    int best = 0;
    double best_norm = -1.0;
    for (int j = 0; j < d; ++j) {
      const double nrm = residual.col(j).norm();
      if (nrm > best_norm * (1.0 + 1e-12)) {
        best = j;
        best_norm = nrm;
      }
    }
    Vector v = residual.col(best);
    // Two passes of re-orthogonalization against the frame built so far.
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < k; ++i) v -= frame.col(i) * frame.col(i).dot(v);
    v.normalize();
    // Phase convention: the pivot coordinate is real and positive.
    const Complex pivot = v(best);
    if (std::abs(pivot) > 0.0) v *= std::conj(pivot) / std::abs(pivot);
    frame.col(k) = v;
    residual -= v * (v.adjoint() * residual);
  }
  return frame;
}

}  // namespace

Subspace::Subspace(const Matrix& columns) {
  require(columns.cols() >= 1 && columns.cols() <= columns.rows(), ErrorKind::RankMismatch,
          "subspace rank must lie in [1, d]");
  const Matrix q = orthonormalize(columns);
  const RealVector s = singular_values(columns);
  require(s(s.size() - 1) > kRankTolerance * std::max(1.0, s(0)), ErrorKind::RankMismatch,
          "columns are not linearly independent");
  frame_ = canonical_frame(q * q.adjoint(), static_cast<int>(columns.cols()));
}

Subspace Subspace::span_of(const Vector& v) { return Subspace(Matrix(v)); }

Subspace Subspace::coordinate(int d, const std::vector<int>& axes) {
  Matrix m = Matrix::Zero(d, static_cast<Eigen::Index>(axes.size()));
  for (std::size_t k = 0; k < axes.size(); ++k) m(axes[k], static_cast<Eigen::Index>(k)) = 1.0;
  return Subspace(m);
}

Vector Subspace::plucker() const {
  const auto rows = combinations(dim(), rank());
  std::vector<int> cols(rank());
  for (int i = 0; i < rank(); ++i) cols[i] = i;
  Vector p(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    p(static_cast<Eigen::Index>(i)) = submatrix(frame_, rows[i], cols).determinant();
  return p;
}

Subspace Subspace::orthogonal_complement() const {
  require(rank() < dim(), ErrorKind::RankMismatch, "complement of the whole space is trivial");
  Eigen::JacobiSVD<Matrix> svd(frame_.adjoint(), Eigen::ComputeFullV);
  return Subspace(svd.matrixV().rightCols(dim() - rank()));
}

Subspace Subspace::image(const Matrix& map) const { return Subspace(map * frame_); }

RealVector principal_angles(const Subspace& a, const Subspace& b) {
  require(a.dim() == b.dim() && a.rank() == b.rank(), ErrorKind::RankMismatch,
          "principal angles need subspaces of equal rank");
  const int l = a.rank();
  RealVector cosines = singular_values(a.frame().adjoint() * b.frame());
  const Matrix residual = b.frame() - a.frame() * (a.frame().adjoint() * b.frame());
  RealVector sines = singular_values(residual);
  // cosines descending pair with sines ascending.
  RealVector angles(l);
  for (int i = 0; i < l; ++i) {
    const double c = std::min(1.0, cosines(i));
    const double s = std::min(1.0, sines(l - 1 - i));
    angles(i) = std::atan2(s, c);
  }
  std::sort(angles.data(), angles.data() + l);
  return angles;
}

double grass_distance(const Subspace& a, const Subspace& b) { return principal_angles(a, b).norm(); }

double min_principal_angle(const Subspace& a, const Subspace& b) {
  require(a.dim() == b.dim(), ErrorKind::RankMismatch, "ambient dimensions differ");
  const RealVector c = singular_values(a.frame().adjoint() * b.frame());
  const double cmax = std::min(1.0, c(0));
  // Sine of the smallest angle from the residual of the smaller subspace.
  const Subspace& small = a.rank() <= b.rank() ? a : b;
  const Subspace& big = a.rank() <= b.rank() ? b : a;
  const Matrix residual = small.frame() - big.frame() * (big.frame().adjoint() * small.frame());
  const RealVector s = singular_values(residual);
  const double smin = std::min(1.0, s(s.size() - 1));
  return std::atan2(smin, cmax);
}

double line_angle(const Vector& u, const Vector& v) {
  return min_principal_angle(Subspace::span_of(u), Subspace::span_of(v));
}

}  // namespace cocycle
