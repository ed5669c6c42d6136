#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "cocycle/random.hpp"

namespace cocycle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// A matrix carried together with a scalar log-scale: value = exp(log_scale) * m.
/// Long products are renormalized into this form to avoid overflow; the
/// projective action is unaffected.
struct ScaledMatrix {
  Matrix m;
  double log_scale = 0.0;

  void renormalize();
};

/// Spectral (operator 2-) norm.
double op_norm(const Matrix& a);

/// Singular values in non-increasing order.
RealVector singular_values(const Matrix& a);

/// Largest singular value divided by the smallest; +inf when singular.
double condition_number(const Matrix& a);

Matrix identity(int d);

Matrix random_gaussian(int rows, int cols, Rng& rng);
Matrix random_unitary(int d, Rng& rng);

/// Orthonormal basis of the column span of a full column rank matrix (thin Q).
Matrix orthonormalize(const Matrix& a);

/// Thin QR; returns Q and log|R_ii| for each column.
struct QrStep {
  Matrix q;
  RealVector log_abs_diag;
};
QrStep qr_step(const Matrix& a);

/// Product of |R_ii| of the thin QR, i.e. the l-volume spanned by the columns.
double log_volume(const Matrix& columns);

/// Sorted k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> combinations(int n, int k);

long long binomial(int n, int k);

Matrix submatrix(const Matrix& a, const std::vector<int>& rows, const std::vector<int>& cols);

/// l-th compound matrix: entry (I,J) is det a[I,J], multi-indices lexicographic.
Matrix compound_matrix(const Matrix& a, int l);
/// Λ^l(a + delta) - Λ^l(a) without cancellation when delta is tiny.
Matrix compound_difference(const Matrix& a, const Matrix& delta, int l);

struct Minor {
  std::vector<int> rows;
  std::vector<int> cols;
  Complex value;
};

/// Every minor m_{I,J} with #I = #J, ordered by size and then lexicographically.
std::vector<Minor> all_minors(const Matrix& a);

/// Inverse via full-pivot LU; throws SingularValue when the condition
/// number exceeds `max_condition`.
Matrix checked_inverse(const Matrix& a, double max_condition = 1e12);

}  // namespace cocycle
