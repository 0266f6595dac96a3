#ifndef CQ_LINALG_HPP
#define CQ_LINALG_HPP

// Small dense exact-rational linear algebra: products, inverses and Gaussian
// elimination. Matrices here are tiny (dim so(p+1,q+1) at desk scale), so no
// pivot heuristics are needed beyond "first nonzero".

#include <stdexcept>
#include <vector>

#include "cq/rational.hpp"

namespace cq {

using RVec = std::vector<Rational>;
using RMat = std::vector<RVec>;

inline RMat rmat(int rows, int cols) { return RMat(rows, RVec(cols)); }

inline RMat rmat_identity(int n) {
  RMat a = rmat(n, n);
  for (int i = 0; i < n; ++i) a[i][i] = 1;
  return a;
}

inline RMat rmat_mul(const RMat& a, const RMat& b) {
  const int n = static_cast<int>(a.size());
  const int k = static_cast<int>(b.size());
  const int p = k ? static_cast<int>(b[0].size()) : 0;
  RMat c = rmat(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) {
      if (a[i][j].is_zero()) continue;
      for (int l = 0; l < p; ++l) c[i][l] += a[i][j] * b[j][l];
    }
  return c;
}

inline RVec rmat_vec(const RMat& a, const RVec& v) {
  RVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
  return r;
}

inline RMat rmat_transpose(const RMat& a) {
  if (a.empty()) return a;
  RMat t = rmat(static_cast<int>(a[0].size()), static_cast<int>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline RMat rmat_add(RMat a, const RMat& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] += b[i][j];
  return a;
}

inline RMat rmat_sub(RMat a, const RMat& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] -= b[i][j];
  return a;
}

inline RMat rmat_scaled(RMat a, const Rational& c) {
  for (auto& row : a)
    for (auto& x : row) x *= c;
  return a;
}

inline Rational rmat_trace(const RMat& a) {
  Rational t;
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

inline bool rmat_is_zero(const RMat& a) {
  for (const auto& row : a)
    for (const auto& x : row)
      if (!x.is_zero()) return false;
  return true;
}

inline bool rvec_is_zero(const RVec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

inline RMat rmat_inverse(RMat a) {
  const int n = static_cast<int>(a.size());
  RMat inv = rmat_identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (!a[r][col].is_zero()) { piv = r; break; }
    if (piv < 0) throw std::domain_error("rmat_inverse: singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const Rational d = a[col][col];
    for (int j = 0; j < n; ++j) { a[col][j] /= d; inv[col][j] /= d; }
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      const Rational f = a[r][col];
      for (int j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

struct LinearSolve {
  bool consistent = false;
  RVec solution;              // one solution of A x = b when consistent
  std::vector<RVec> kernel;   // basis of the nullspace of A
};

/// Row-reduces the augmented system A x = b.
inline LinearSolve solve_linear(RMat a, RVec b) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  std::vector<int> pivot_col_of_row;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int piv = -1;
    for (int r = row; r < rows; ++r)
      if (!a[r][col].is_zero()) { piv = r; break; }
    if (piv < 0) continue;
    std::swap(a[piv], a[row]);
    std::swap(b[piv], b[row]);
    const Rational d = a[row][col];
    for (int j = col; j < cols; ++j) a[row][j] /= d;
    b[row] /= d;
    for (int r = 0; r < rows; ++r) {
      if (r == row || a[r][col].is_zero()) continue;
      const Rational f = a[r][col];
      for (int j = col; j < cols; ++j) a[r][j] -= f * a[row][j];
      b[r] -= f * b[row];
    }
    pivot_col_of_row.push_back(col);
    ++row;
  }
  LinearSolve out;
  for (int r = row; r < rows; ++r)
    if (!b[r].is_zero()) return out;  // inconsistent
  out.consistent = true;
  out.solution.assign(cols, Rational());
  for (int r = 0; r < row; ++r) out.solution[pivot_col_of_row[r]] = b[r];
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col_of_row) is_pivot[c] = true;
  for (int free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    RVec k(cols);
    k[free_col] = 1;
    for (int r = 0; r < row; ++r) k[pivot_col_of_row[r]] = -a[r][free_col];
    out.kernel.push_back(std::move(k));
  }
  return out;
}

}  // namespace cq

#endif  // CQ_LINALG_HPP
