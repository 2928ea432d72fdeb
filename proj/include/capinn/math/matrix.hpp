#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "capinn/errors.hpp"

namespace capinn::math {

// Dense row-major matrix of doubles. Small sizes only (desk-scale
// preconditioners and momenta, <= a few hundred rows).
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols, 0.0) {
    if (rows < 0 || cols < 0) throw DimensionError("Matrix: negative dimension");
  }
  Matrix(int rows, int cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != size_t(rows) * cols)
      throw DimensionError("Matrix: data length != rows*cols");
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  // Construction gate for values coming from outside the process.
  static Matrix from_external(int rows, int cols, std::vector<double> data) {
    for (double v : data)
      if (!std::isfinite(v)) throw NonFiniteError("Matrix::from_external");
    return Matrix(rows, cols, std::move(data));
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return data_.size(); }

  double& operator()(int r, int c) { return data_[size_t(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[size_t(r) * cols_ + c]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o);
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o);
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw DimensionError("Matrix: shape mismatch");
  }

  int rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// C = A * B
Matrix matmul(const Matrix& a, const Matrix& b);

// C = A * B^T
Matrix matmul_nt(const Matrix& a, const Matrix& b);

// C = A^T * B
Matrix matmul_tn(const Matrix& a, const Matrix& b);

// Frobenius inner product <A, B>.
double fro_dot(const Matrix& a, const Matrix& b);

}  // namespace capinn::math
