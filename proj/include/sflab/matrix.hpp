#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "field.hpp"
#include "fourier.hpp"

namespace sflab {

// Small dense matrices over an exact coefficient ring (FieldElement,
// FourierScalar, ...).  Sizes stay in the single digits, so determinants go
// through the permutation sum and inverses through the adjugate or Gauss.
template <typename T>
struct Matrix {
  int rows = 0, cols = 0;
  std::vector<T> data;

  Matrix() = default;
  Matrix(int r, int c, const T& fill) : rows(r), cols(c), data((size_t)r * c, fill) {}

  T& at(int i, int j) { return data[(size_t)i * cols + j]; }
  const T& at(int i, int j) const { return data[(size_t)i * cols + j]; }

  static void check_same(const Matrix& x, const Matrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw DimensionMismatch("matrix shapes differ");
  }

  friend Matrix operator+(const Matrix& x, const Matrix& y) {
    check_same(x, y);
    Matrix out = x;
    for (size_t k = 0; k < out.data.size(); ++k) out.data[k] = out.data[k] + y.data[k];
    return out;
  }
  friend Matrix operator-(const Matrix& x, const Matrix& y) {
    check_same(x, y);
    Matrix out = x;
    for (size_t k = 0; k < out.data.size(); ++k) out.data[k] = out.data[k] - y.data[k];
    return out;
  }
  Matrix operator-() const {
    Matrix out = *this;
    for (auto& v : out.data) v = -v;
    return out;
  }
  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols != y.rows) throw DimensionMismatch("matrix product shapes");
    Matrix out(x.rows, y.cols, x.data.empty() ? T() : x.at(0, 0) - x.at(0, 0));
    for (int i = 0; i < x.rows; ++i)
      for (int k = 0; k < x.cols; ++k)
        for (int j = 0; j < y.cols; ++j)
          out.at(i, j) = out.at(i, j) + x.at(i, k) * y.at(k, j);
    return out;
  }
  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.rows == y.rows && x.cols == y.cols && x.data == y.data;
  }
  friend bool operator!=(const Matrix& x, const Matrix& y) { return !(x == y); }

  Matrix transpose() const {
    if (data.empty()) {
      Matrix out;
      out.rows = cols;
      out.cols = rows;
      return out;
    }
    Matrix out(cols, rows, data[0]);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) out.at(j, i) = at(i, j);
    return out;
  }

  bool is_zero() const {
    for (const auto& v : data)
      if (!v.is_zero()) return false;
    return true;
  }
};

template <typename T>
Matrix<T> identity_matrix(int n, const T& zero, const T& one) {
  Matrix<T> out(n, n, zero);
  for (int i = 0; i < n; ++i) out.at(i, i) = one;
  return out;
}

template <typename T>
Matrix<T> hstack(const Matrix<T>& x, const Matrix<T>& y) {
  if (x.rows != y.rows) throw DimensionMismatch("hstack row counts");
  Matrix<T> out(x.rows, x.cols + y.cols, x.data.empty() ? y.data[0] : x.data[0]);
  for (int i = 0; i < x.rows; ++i) {
    for (int j = 0; j < x.cols; ++j) out.at(i, j) = x.at(i, j);
    for (int j = 0; j < y.cols; ++j) out.at(i, x.cols + j) = y.at(i, j);
  }
  return out;
}

template <typename T>
Matrix<T> vstack(const Matrix<T>& x, const Matrix<T>& y) {
  if (x.cols != y.cols) throw DimensionMismatch("vstack column counts");
  Matrix<T> out(x.rows + y.rows, x.cols, x.data.empty() ? y.data[0] : x.data[0]);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) out.at(i, j) = x.at(i, j);
  for (int i = 0; i < y.rows; ++i)
    for (int j = 0; j < y.cols; ++j) out.at(x.rows + i, j) = y.at(i, j);
  return out;
}

inline int permutation_sign(const std::vector<int>& p) {
  int inv = 0;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

// Determinant by the permutation sum; fine for the n <= 6 sizes used here.
template <typename T>
T matrix_det(const Matrix<T>& m) {
  if (m.rows != m.cols) throw DimensionMismatch("determinant of non-square matrix");
  int n = m.rows;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  bool first = true;
  T acc = m.data.empty() ? T() : m.at(0, 0);
  do {
    T term = m.at(0, p[0]);
    for (int i = 1; i < n; ++i) term = term * m.at(i, p[i]);
    int s = permutation_sign(p);
    if (first) {
      acc = s > 0 ? term : -term;
      first = false;
    } else {
      acc = s > 0 ? acc + term : acc - term;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return acc;
}

template <typename T>
Matrix<T> matrix_minor(const Matrix<T>& m, int di, int dj) {
  Matrix<T> out(m.rows - 1, m.cols - 1, m.data[0]);
  for (int i = 0, oi = 0; i < m.rows; ++i) {
    if (i == di) continue;
    for (int j = 0, oj = 0; j < m.cols; ++j) {
      if (j == dj) continue;
      out.at(oi, oj) = m.at(i, j);
      ++oj;
    }
    ++oi;
  }
  return out;
}

// adj(A)_{ij} = (-1)^{i+j} det(minor_{ji}); A * adj(A) = det(A) * I.
template <typename T>
Matrix<T> matrix_adjugate(const Matrix<T>& m) {
  if (m.rows != m.cols) throw DimensionMismatch("adjugate of non-square matrix");
  int n = m.rows;
  if (n == 1) throw DimensionMismatch("adjugate needs n >= 2; invert 1x1 directly");
  Matrix<T> out(n, n, m.data[0]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      T d = matrix_det(matrix_minor(m, j, i));
      out.at(i, j) = ((i + j) % 2 == 0) ? d : -d;
    }
  return out;
}

// Units of the trig-polynomial ring are the single modes with invertible
// coefficient; anything else has no inverse there.
inline FourierScalar fourier_unit_inverse(const FourierScalar& f) {
  if (f.c.size() != 1) throw NotInvertible("fourier scalar is not a unit");
  const auto& [k, v] = *f.c.begin();
  std::vector<long> mk(k);
  for (auto& x : mk) x = -x;
  FourierScalar out(f.n);
  out.c.emplace(mk, v.inverse());
  return out;
}

inline Matrix<FourierScalar> matrix_inverse_fourier(const Matrix<FourierScalar>& m) {
  if (m.rows != m.cols) throw DimensionMismatch("inverse of non-square matrix");
  if (m.rows == 1) {
    Matrix<FourierScalar> out = m;
    out.at(0, 0) = fourier_unit_inverse(m.at(0, 0));
    return out;
  }
  FourierScalar det = matrix_det(m);
  FourierScalar dinv = fourier_unit_inverse(det);
  Matrix<FourierScalar> adj = matrix_adjugate(m);
  for (auto& v : adj.data) v = v * dinv;
  return adj;
}

struct Rref {
  Matrix<FieldElement> r;
  int rank = 0;
  std::vector<int> pivots;
};

inline Rref matrix_rref(Matrix<FieldElement> m) {
  Rref out;
  int lead = 0;
  for (int row = 0; row < m.rows && lead < m.cols; ++row) {
    int piv = -1;
    while (lead < m.cols) {
      for (int i = row; i < m.rows; ++i)
        if (!m.at(i, lead).is_zero()) {
          piv = i;
          break;
        }
      if (piv >= 0) break;
      ++lead;
    }
    if (piv < 0) break;
    for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(row, j));
    FieldElement inv = m.at(row, lead).inverse();
    for (int j = 0; j < m.cols; ++j) m.at(row, j) = m.at(row, j) * inv;
    for (int i = 0; i < m.rows; ++i) {
      if (i == row || m.at(i, lead).is_zero()) continue;
      FieldElement f = m.at(i, lead);
      for (int j = 0; j < m.cols; ++j) m.at(i, j) = m.at(i, j) - f * m.at(row, j);
    }
    out.pivots.push_back(lead);
    ++lead;
  }
  out.rank = (int)out.pivots.size();
  out.r = std::move(m);
  return out;
}

inline int matrix_rank(const Matrix<FieldElement>& m) { return matrix_rref(m).rank; }

inline Matrix<FieldElement> matrix_inverse_field(const Matrix<FieldElement>& m) {
  if (m.rows != m.cols) throw DimensionMismatch("inverse of non-square matrix");
  int n = m.rows;
  Matrix<FieldElement> aug =
      hstack(m, identity_matrix(n, FieldElement::zero(), FieldElement::one()));
  Rref rr = matrix_rref(aug);
  if (rr.rank < n || rr.pivots.back() >= n) throw NotInvertible("singular matrix");
  Matrix<FieldElement> out(n, n, FieldElement::zero());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.at(i, j) = rr.r.at(i, n + j);
  return out;
}

// col(A) == col(B)  <=>  rank A == rank B == rank [A|B].
inline bool same_column_space(const Matrix<FieldElement>& x, const Matrix<FieldElement>& y) {
  int rx = matrix_rank(x), ry = matrix_rank(y);
  if (rx != ry) return false;
  return matrix_rank(hstack(x, y)) == rx;
}

}  // namespace sflab
