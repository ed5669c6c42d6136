#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cocycle/error.hpp"
#include "cocycle/linalg.hpp"
#include "cocycle/simplicity.hpp"
#include "cocycle/skewprod.hpp"

// Independent reference implementations and shared fixtures for tests.
namespace oracle {

using cocycle::Complex;
using cocycle::Matrix;

// Leibniz expansion; exponential but independent of any factorization.
inline Complex det(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return 1.0;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Complex total = 0.0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
    Complex term = inversions % 2 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) term *= a(i, perm[static_cast<std::size_t>(i)]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// k-subsets by bitmask, sorted lexicographically.
inline std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (__builtin_popcount(static_cast<unsigned>(mask)) != k) continue;
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) s.push_back(i);
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline Matrix compound(const Matrix& a, int k) {
  const auto idx = subsets(static_cast<int>(a.rows()), k);
  Matrix c(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) {
      Matrix sub(k, k);
      for (int r = 0; r < k; ++r)
        for (int s = 0; s < k; ++s) sub(r, s) = a(idx[i][static_cast<std::size_t>(r)], idx[j][static_cast<std::size_t>(s)]);
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = det(sub);
    }
  return c;
}

inline double rel_error(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

inline double strict_rel_error(const Matrix& a, const Matrix& b) { return (a - b).norm() / b.norm(); }

}  // namespace oracle

namespace fixtures {

using namespace cocycle;

inline FiberMapFamily golden_rotation() {
  return FiberMapFamily::rotation(2, 0, {0.6180339887498949, 0.41421356237309503});
}

inline MeasureSpec fair_coin() { return MeasureSpec::bernoulli({0.5, 0.5}); }

inline Matrix theorem_c_r3() {
  Matrix r(3, 3);
  r << 0, 0.12, 0.07, 0.09, 0, 0.11, 0.05, 0.10, 0;
  return r;
}

inline TheoremCExample theorem_c_d3() {
  return theoremC_example({1.4, 1.1, 0.8}, theorem_c_r3(), 0.3, {1}, 0);
}

inline TheoremCExample theorem_c_d2() {
  Matrix r(2, 2);
  r << 0, 0.1, 0.08, 0;
  return theoremC_example({1.3, 0.8}, r, 0.3, {1}, 0);
}

inline Matrix diag(std::vector<Complex> v) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = v[i];
  return m;
}

}  // namespace fixtures

#define EXPECT_COCYCLE_ERROR(stmt, expected_kind)                                  \
  do {                                                                             \
    try {                                                                          \
      stmt;                                                                        \
      ADD_FAILURE() << "expected " << cocycle::to_string(expected_kind);           \
    } catch (const cocycle::Error& e__) {                                          \
      EXPECT_EQ(e__.kind(), expected_kind) << e__.what();                          \
    }                                                                              \
  } while (0)
