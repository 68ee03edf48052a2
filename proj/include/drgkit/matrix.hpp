#pragma once

#include <cstddef>
#include <vector>

#include "drgkit/errors.hpp"
#include "drgkit/scalar.hpp"

namespace drgkit {

// Dense row-major matrix over either scalar field.  Columns double as
// subspace basis vectors, so column helpers are first-class here.
template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = scalar_from_int<S>(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  S& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<S> col(std::size_t j) const {
    std::vector<S> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  void set_col(std::size_t j, const std::vector<S>& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  Matrix columns(const std::vector<std::size_t>& idx) const {
    Matrix m(rows_, idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j)
      for (std::size_t i = 0; i < rows_; ++i) m(i, j) = (*this)(i, idx[j]);
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (const S& x : a_) {
      double v = std::fabs(to_double(x));
      if (v > m) m = v;
    }
    return m;
  }

  S trace() const {
    S t = scalar_from_int<S>(0);
    for (std::size_t i = 0; i < rows_ && i < cols_; ++i) t += (*this)(i, i);
    return t;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.a_.size(); ++k) c.a_[k] = a.a_[k] + b.a_[k];
    return c;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.a_.size(); ++k) c.a_[k] = a.a_[k] - b.a_[k];
    return c;
  }

  // i-k-j loop order keeps the inner walk contiguous for both fields
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        if (scalar_is_zero(aik)) continue;
        const S* brow = &b.a_[k * b.cols_];
        S* crow = &c.a_[i * c.cols_];
        for (std::size_t j = 0; j < b.cols_; ++j) crow[j] += aik * brow[j];
      }
    }
    return c;
  }

  Matrix scaled(const S& s) const {
    Matrix c(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) c.a_[k] = a_[k] * s;
    return c;
  }

  std::vector<S> apply(const std::vector<S>& v) const {
    std::vector<S> r(rows_, scalar_from_int<S>(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      S acc = scalar_from_int<S>(0);
      const S* row = &a_[i * cols_];
      for (std::size_t j = 0; j < cols_; ++j)
        if (!scalar_is_zero(row[j])) acc += row[j] * v[j];
      r[i] = acc;
    }
    return r;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<S> a_;
};

template <class S>
Matrix<S> hcat(const Matrix<S>& a, const Matrix<S>& b) {
  Matrix<S> c(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
  }
  return c;
}

template <class S>
Matrix<S> schur(const Matrix<S>& a, const Matrix<S>& b) {
  Matrix<S> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) * b(i, j);
  return c;
}

inline Matrix<double> to_float(const Matrix<Rational>& m) {
  Matrix<double> f(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) f(i, j) = to_double(m(i, j));
  return f;
}

inline const Matrix<double>& to_float(const Matrix<double>& m) { return m; }

template <class S>
S dot(const std::vector<S>& a, const std::vector<S>& b) {
  S acc = scalar_from_int<S>(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

template <class S>
double norm2(const std::vector<S>& v) {
  double acc = 0.0;
  for (const S& x : v) {
    double d = to_double(x);
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace drgkit
