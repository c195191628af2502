#pragma once

// Small dense matrices over double, Complex or Jet scalars.

#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

#include "sdw/jets.hpp"

namespace sdw {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0.0)) {}
  Matrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw LayoutError("ragged matrix initializer");
      for (const auto& v : row) data_.push_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<T>& data() const noexcept { return data_; }
  std::vector<T>& data() noexcept { return data_; }

  template <class F>
  auto map(F&& f) const {
    using U = decltype(f(std::declval<const T&>()));
    Matrix<U> r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data()[i] = f(data_[i]);
    return r;
  }

  Matrix transpose() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  Matrix conj_transpose() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = conj((*this)(i, j));
    return r;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix r(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
    return r;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  T trace() const {
    T t(0.0);
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t = t + (*this)(i, i);
    return t;
  }

  Matrix& operator+=(const Matrix& b) { return *this = *this + b; }
  Matrix& operator-=(const Matrix& b) { return *this = *this - b; }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    check_same(a, b);
    Matrix r(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] + b.data_[i];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    check_same(a, b);
    Matrix r(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] - b.data_[i];
    return r;
  }
  friend Matrix operator-(const Matrix& a) {
    Matrix r(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = -a.data_[i];
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw LayoutError("matrix product shape mismatch");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) = r(i, j) + aik * b(k, j);
      }
    return r;
  }
  friend Matrix operator*(const T& s, const Matrix& a) {
    Matrix r(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = s * a.data_[i];
    return r;
  }
  friend Matrix operator*(const Matrix& a, const T& s) {
    Matrix r(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] * s;
    return r;
  }

 private:
  static void check_same(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw LayoutError("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RMatrix = Matrix<double>;
using CMatrix = Matrix<Complex>;
using RVector = std::vector<double>;

/// Gauss-Jordan with partial pivoting on |base value|; solves A X = B.
template <class T>
Matrix<T> solve(Matrix<T> a, Matrix<T> b, double singular_tol = 0.0) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n) throw LayoutError("solve: shape mismatch");
  double scale = 0.0;
  for (const auto& v : a.data()) scale = std::max(scale, base_abs(v));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    double best = base_abs(a(c, c));
    for (std::size_t r = c + 1; r < n; ++r)
      if (base_abs(a(r, c)) > best) {
        best = base_abs(a(r, c));
        piv = r;
      }
    if (best == 0.0 || best <= singular_tol * scale)
      throw NumericalError("singular matrix in linear solve");
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(c, j), b(piv, j));
    }
    T inv = reciprocal(a(c, c));
    for (std::size_t j = c; j < n; ++j) a(c, j) = a(c, j) * inv;
    for (std::size_t j = 0; j < b.cols(); ++j) b(c, j) = b(c, j) * inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      T f = a(r, c);
      if (base_abs(f) == 0.0 && !is_jet_v<T>) continue;
      for (std::size_t j = c; j < n; ++j) a(r, j) = a(r, j) - f * a(c, j);
      for (std::size_t j = 0; j < b.cols(); ++j) b(r, j) = b(r, j) - f * b(c, j);
    }
  }
  return b;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
  return solve(a, Matrix<T>::identity(a.rows()));
}

/// Determinant by Gaussian elimination with partial pivoting.
template <class T>
T determinant(Matrix<T> a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw LayoutError("determinant of a non-square matrix");
  T det(1.0);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    double best = base_abs(a(c, c));
    for (std::size_t r = c + 1; r < n; ++r)
      if (base_abs(a(r, c)) > best) {
        best = base_abs(a(r, c));
        piv = r;
      }
    if (best == 0.0) {
      if constexpr (is_jet_v<T>) {
        // Pivot-free cofactor expansion keeps higher Taylor coefficients of a singular base.
        return cofactor_determinant(a);
      } else {
        return T(0.0);
      }
    }
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      det = -det;
    }
    det = det * a(c, c);
    T inv = reciprocal(a(c, c));
    for (std::size_t r = c + 1; r < n; ++r) {
      T f = a(r, c) * inv;
      for (std::size_t j = c; j < n; ++j) a(r, j) = a(r, j) - f * a(c, j);
    }
  }
  return det;
}

/// Laplace expansion; exact for any scalar type, intended for n <= 4.
template <class T>
T cofactor_determinant(const Matrix<T>& a) {
  const std::size_t n = a.rows();
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  T det(0.0);
  for (std::size_t j = 0; j < n; ++j) {
    Matrix<T> minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0, cc = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = a(r, c);
      }
    T term = a(0, j) * cofactor_determinant(minor);
    det = (j % 2 == 0) ? det + term : det - term;
  }
  return det;
}

template <class T>
double frobenius_norm(const Matrix<T>& a) {
  double s = 0.0;
  for (const auto& v : a.data()) s += std::norm(base_scalar(v));
  return std::sqrt(s);
}

/// Base values of a jet matrix.
template <class T>
CMatrix base_values(const Matrix<T>& a) {
  return a.map([](const T& v) { return base_scalar(v); });
}

template <class T>
Matrix<T> truncate(const Matrix<T>& a, int order) {
  return a.map([order](const T& v) { return truncate(v, order); });
}

/// Promote a numeric matrix to scalar type T.
template <class T, class U>
Matrix<T> promote(const Matrix<U>& a) {
  return a.map([](const U& v) { return T(v); });
}

/// Jacobi eigenvalues of a real symmetric matrix.
std::vector<double> symmetric_eigenvalues(RMatrix a);

}  // namespace sdw
