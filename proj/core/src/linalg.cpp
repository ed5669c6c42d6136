#include "cocycle/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cocycle/error.hpp"

namespace cocycle {

void ScaledMatrix::renormalize() {
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale > 0.0 && std::isfinite(scale)) {
    m /= scale;
    log_scale += std::log(scale);
  }
}

double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == 1 || a.cols() == 1) return a.norm();
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

RealVector singular_values(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

double condition_number(const Matrix& a) {
  const RealVector s = singular_values(a);
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

Matrix identity(int d) { return Matrix::Identity(d, d); }

Matrix random_gaussian(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = Complex(rng.normal(), rng.normal());
  return g;
}

Matrix random_unitary(int d, Rng& rng) { return orthonormalize(random_gaussian(d, d, rng)); }

Matrix orthonormalize(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
  // Fix the phase so that R has a positive real diagonal; makes Q a
  // deterministic function of the input columns.
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  return q;
}

QrStep qr_step(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  QrStep out;
  out.q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
  out.log_abs_diag.resize(a.cols());
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    out.log_abs_diag(j) = std::log(mag);
    if (mag > 0.0) out.q.col(j) *= rjj / mag;
  }
  return out;
}

double log_volume(const Matrix& columns) { return qr_step(columns).log_abs_diag.sum(); }

std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Matrix submatrix(const Matrix& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix s(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = a(rows[i], cols[j]);
  return s;
}

namespace {

Complex small_det(const Matrix& s) {
  switch (s.rows()) {
    case 0: return Complex(1.0, 0.0);
    case 1: return s(0, 0);
    case 2: return s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
    default: return s.fullPivLu().determinant();
  }
}

}  // namespace

Matrix compound_matrix(const Matrix& a, int l) {
  require(a.rows() == a.cols(), ErrorKind::PreconditionViolation, "compound of non-square matrix");
  const int d = static_cast<int>(a.rows());
  require(l >= 1 && l <= d, ErrorKind::PreconditionViolation,
          "exterior power order must lie in [1, d]");
  const auto idx = combinations(d, l);
  const auto n = static_cast<Eigen::Index>(idx.size());
  Matrix c(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) c(i, j) = small_det(submatrix(a, idx[i], idx[j]));
  return c;
}

Matrix compound_difference(const Matrix& a, const Matrix& delta, int l) {
  require(a.rows() == a.cols() && a.rows() == delta.rows() && a.cols() == delta.cols(),
          ErrorKind::PreconditionViolation, "compound difference needs equal square matrices");
  const int d = static_cast<int>(a.rows());
  require(l >= 1 && l <= d, ErrorKind::PreconditionViolation,
          "exterior power order must lie in [1, d]");
  const auto idx = combinations(d, l);
  const auto n = static_cast<Eigen::Index>(idx.size());
  Matrix c = Matrix::Zero(n, n);
  // The determinant is multilinear in the columns: expand over every
  // nonempty set of columns taken from delta.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Matrix sa = submatrix(a, idx[i], idx[j]);
      const Matrix sd = submatrix(delta, idx[i], idx[j]);
      for (unsigned mask = 1; mask < (1u << l); ++mask) {
        Matrix m = sa;
        for (int k = 0; k < l; ++k)
          if (mask & (1u << k)) m.col(k) = sd.col(k);
        c(i, j) += small_det(m);
      }
    }
  return c;
}

std::vector<Minor> all_minors(const Matrix& a) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  const int kmax = std::min(rows, cols);
  std::vector<Minor> out;
  for (int k = 1; k <= kmax; ++k) {
    const auto ri = combinations(rows, k);
    const auto ci = combinations(cols, k);
    for (const auto& r : ri)
      for (const auto& c : ci) out.push_back({r, c, small_det(submatrix(a, r, c))});
  }
  return out;
}

Matrix checked_inverse(const Matrix& a, double max_condition) {
  const double cond = condition_number(a);
  if (!(cond <= max_condition))
    fail(ErrorKind::SingularValue, "matrix condition number " + std::to_string(cond) +
                                       " exceeds " + std::to_string(max_condition));
  return a.fullPivLu().inverse();
}

}  // namespace cocycle
